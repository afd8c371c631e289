#include "rotodet/bundle.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace rotodet::bundle {

namespace {

constexpr const char* kMagic = "rotodet-model";

const char* family_name(wavelet::Family f) {
    return f == wavelet::Family::haar ? "haar" : "db2";
}
const char* boundary_name(wavelet::Boundary b) {
    return b == wavelet::Boundary::periodic ? "periodic" : "symmetric";
}
const char* mode_name(wavelet::ThresholdMode m) {
    return m == wavelet::ThresholdMode::soft ? "soft" : "hard";
}
const char* selection_name(wavelet::ThresholdSelection s) {
    return s == wavelet::ThresholdSelection::universal ? "universal" : "fixed";
}
const char* backend_name(wavelet::Backend b) {
    return b == wavelet::Backend::dwt ? "dwt" : "swt";
}

wavelet::Family family_from(const std::string& s) {
    if (s == "haar") return wavelet::Family::haar;
    if (s == "db2") return wavelet::Family::db2;
    throw CorruptModel("model: unknown wavelet family " + s);
}
wavelet::Boundary boundary_from(const std::string& s) {
    if (s == "periodic") return wavelet::Boundary::periodic;
    if (s == "symmetric") return wavelet::Boundary::symmetric;
    throw CorruptModel("model: unknown boundary " + s);
}
wavelet::ThresholdMode mode_from(const std::string& s) {
    if (s == "soft") return wavelet::ThresholdMode::soft;
    if (s == "hard") return wavelet::ThresholdMode::hard;
    throw CorruptModel("model: unknown threshold mode " + s);
}
wavelet::ThresholdSelection selection_from(const std::string& s) {
    if (s == "universal") return wavelet::ThresholdSelection::universal;
    if (s == "fixed") return wavelet::ThresholdSelection::fixed;
    throw CorruptModel("model: unknown threshold selection " + s);
}
wavelet::Backend backend_from(const std::string& s) {
    if (s == "dwt") return wavelet::Backend::dwt;
    if (s == "swt") return wavelet::Backend::swt;
    throw CorruptModel("model: unknown backend " + s);
}

// Little-endian f64 on any host: shifts act on the integer value, so the
// byte order written is independent of native endianness.
void put_f64(std::vector<unsigned char>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(bits >> (8 * i)));
}

double get_f64(std::span<const unsigned char> bytes, std::size_t idx) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[idx * 8 + i];
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

} // namespace

void validate(const ModelBundle& b) {
    if (b.pca.dim != b.window * b.window)
        throw ModelMismatch("bundle: PCA dimension != window^2");
    if (b.grnn.dim() != b.pca.rank)
        throw ModelMismatch("bundle: GRNN dimension != PCA rank");
}

std::vector<unsigned char> serialize(const ModelBundle& b) {
    validate(b);
    const int d = b.pca.dim, k = b.pca.rank, m = b.grnn.count();

    nlohmann::ordered_json header;
    header["magic"] = kMagic;
    header["version"] = b.version;
    header["window"] = b.window;
    header["wavelet"] = {{"family", family_name(b.denoise.spec.family)},
                         {"boundary", boundary_name(b.denoise.spec.boundary)},
                         {"levels", b.denoise.levels},
                         {"mode", mode_name(b.denoise.rule.mode)},
                         {"selection", selection_name(b.denoise.rule.selection)},
                         {"backend", backend_name(b.denoise.backend)}};
    header["pca"] = {{"d", d}, {"k", k}};
    header["grnn"] = {{"m", m}};
    header["train"] = {{"samples", b.meta.sample_count}, {"seed", b.meta.seed}};
    // payload layout, all little-endian f64:
    // mean[d] basis[d*k] eigenvalues[k] total_variance
    // centers[m*k] targets[m] spread fixed_t density_threshold
    const std::size_t payload_count =
        static_cast<std::size_t>(d) + static_cast<std::size_t>(d) * k + k +
        1 + static_cast<std::size_t>(m) * k + m + 3;
    header["payload_count"] = payload_count;

    std::string head = header.dump();
    std::vector<unsigned char> out(head.begin(), head.end());
    out.push_back('\n');
    out.reserve(out.size() + payload_count * 8);

    for (double v : b.pca.mean) put_f64(out, v);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < k; ++c) put_f64(out, b.pca.basis(r, c));
    for (double v : b.pca.eigenvalues) put_f64(out, v);
    put_f64(out, b.pca.total_variance);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < k; ++c) put_f64(out, b.grnn.centers(r, c));
    for (double v : b.grnn.targets) put_f64(out, v);
    put_f64(out, b.grnn.spread);
    put_f64(out, b.denoise.rule.fixed_t);
    put_f64(out, b.density_threshold);
    return out;
}

ModelBundle deserialize(std::span<const unsigned char> bytes) {
    const auto nl = std::find(bytes.begin(), bytes.end(), static_cast<unsigned char>('\n'));
    if (nl == bytes.end()) throw CorruptModel("model: missing header line");
    const std::string head(bytes.begin(), nl);

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(head);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptModel(std::string("model: bad header JSON: ") + e.what());
    }

    ModelBundle b;
    try {
        if (header.at("magic").get<std::string>() != kMagic)
            throw CorruptModel("model: wrong magic");
        b.version = header.at("version").get<int>();
        b.window = header.at("window").get<int>();
        const auto& wv = header.at("wavelet");
        b.denoise.spec.family = family_from(wv.at("family").get<std::string>());
        b.denoise.spec.boundary = boundary_from(wv.at("boundary").get<std::string>());
        b.denoise.levels = wv.at("levels").get<int>();
        b.denoise.rule.mode = mode_from(wv.at("mode").get<std::string>());
        b.denoise.rule.selection = selection_from(wv.at("selection").get<std::string>());
        b.denoise.backend = backend_from(wv.at("backend").get<std::string>());
        b.pca.dim = header.at("pca").at("d").get<int>();
        b.pca.rank = header.at("pca").at("k").get<int>();
        b.meta.sample_count = header.at("train").at("samples").get<int>();
        b.meta.seed = header.at("train").at("seed").get<std::uint64_t>();

        const int d = b.pca.dim, k = b.pca.rank;
        const int m = header.at("grnn").at("m").get<int>();
        if (d < 1 || k < 1 || k > d || m < 1)
            throw CorruptModel("model: implausible dimensions");

        const std::size_t payload_count = header.at("payload_count").get<std::size_t>();
        const std::size_t expect =
            static_cast<std::size_t>(d) + static_cast<std::size_t>(d) * k + k + 1 +
            static_cast<std::size_t>(m) * k + m + 3;
        if (payload_count != expect)
            throw CorruptModel("model: payload count disagrees with dimensions");

        const auto payload = bytes.subspan(
            static_cast<std::size_t>(std::distance(bytes.begin(), nl)) + 1);
        if (payload.size() < payload_count * 8)
            throw CorruptModel("model: payload truncated");

        std::size_t idx = 0;
        b.pca.mean.resize(static_cast<std::size_t>(d));
        for (double& v : b.pca.mean) v = get_f64(payload, idx++);
        b.pca.basis = Matrix(d, k);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < k; ++c) b.pca.basis(r, c) = get_f64(payload, idx++);
        b.pca.eigenvalues.resize(static_cast<std::size_t>(k));
        for (double& v : b.pca.eigenvalues) v = get_f64(payload, idx++);
        b.pca.total_variance = get_f64(payload, idx++);
        b.grnn.centers = Matrix(m, k);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < k; ++c) b.grnn.centers(r, c) = get_f64(payload, idx++);
        b.grnn.targets.resize(static_cast<std::size_t>(m));
        for (double& v : b.grnn.targets) v = get_f64(payload, idx++);
        b.grnn.spread = get_f64(payload, idx++);
        b.denoise.rule.fixed_t = get_f64(payload, idx++);
        b.density_threshold = get_f64(payload, idx++);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptModel(std::string("model: header field error: ") + e.what());
    }

    try {
        validate(b);
    } catch (const ModelMismatch& e) {
        throw CorruptModel(std::string("model: ") + e.what());
    }
    return b;
}

void save(const ModelBundle& b, const std::filesystem::path& path) {
    const auto bytes = serialize(b);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoFailure("short write to " + path.string());
}

ModelBundle load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

} // namespace rotodet::bundle
