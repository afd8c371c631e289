#include "rotodet/manifest.hpp"

#include <fstream>

#include <json.hpp>

namespace rotodet::manifest {

std::string to_json(const Manifest& m) {
    nlohmann::ordered_json doc;
    doc["seed"] = m.seed;
    doc["window"] = m.window;
    doc["noise_sigma"] = m.noise_sigma;
    doc["angle_min"] = m.angle_min;
    doc["angle_max"] = m.angle_max;
    doc["patches"] = nlohmann::ordered_json::array();
    for (const auto& p : m.patches)
        doc["patches"].push_back({{"file", p.file}, {"angle_deg", p.angle_deg}});
    doc["scenes"] = nlohmann::ordered_json::array();
    for (const auto& s : m.scenes) {
        nlohmann::ordered_json boxes = nlohmann::ordered_json::array();
        for (const auto& b : s.boxes)
            boxes.push_back({{"x", b.x}, {"y", b.y}, {"size", b.size},
                             {"angle_deg", b.angle_deg}});
        doc["scenes"].push_back({{"file", s.file}, {"boxes", std::move(boxes)}});
    }
    return doc.dump(2) + "\n";
}

Manifest from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
        Manifest m;
        m.seed = doc.at("seed").get<std::uint64_t>();
        m.window = doc.at("window").get<int>();
        m.noise_sigma = doc.at("noise_sigma").get<double>();
        m.angle_min = doc.at("angle_min").get<double>();
        m.angle_max = doc.at("angle_max").get<double>();
        for (const auto& p : doc.at("patches"))
            m.patches.push_back({p.at("file").get<std::string>(),
                                 p.at("angle_deg").get<double>()});
        for (const auto& s : doc.at("scenes")) {
            SceneEntry e;
            e.file = s.at("file").get<std::string>();
            for (const auto& b : s.at("boxes"))
                e.boxes.push_back({b.at("x").get<int>(), b.at("y").get<int>(),
                                   b.at("size").get<int>(),
                                   b.at("angle_deg").get<double>()});
            m.scenes.push_back(std::move(e));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw IoFailure(std::string("manifest: ") + e.what());
    }
}

void save(const Manifest& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << to_json(m);
    if (!out) throw IoFailure("short write to " + path.string());
}

Manifest load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

} // namespace rotodet::manifest
