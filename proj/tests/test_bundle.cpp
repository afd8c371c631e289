#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "rotodet/bundle.hpp"
#include "rotodet/eval.hpp"
#include "rotodet/rng.hpp"
#include "rotodet/trainer.hpp"

using namespace rotodet;

namespace {

bundle::ModelBundle trained_bundle() {
    const Image tmpl = eval::default_template(15);
    eval::SynthParams params;
    const auto set = eval::synth_patches(19, 40, tmpl, params);
    trainer::TrainOptions opts;
    opts.seed = 19;
    return trainer::train(set.patches, set.angles, opts);
}

} // namespace

TEST_CASE("serialize/deserialize round trip is bit-exact") {
    const auto original = trained_bundle();
    const auto bytes = bundle::serialize(original);
    const auto copy = bundle::deserialize(bytes);

    CHECK(copy.window == original.window);
    CHECK(copy.version == original.version);
    CHECK(copy.density_threshold == original.density_threshold);
    CHECK(copy.meta.sample_count == original.meta.sample_count);
    CHECK(copy.meta.seed == original.meta.seed);
    CHECK(copy.pca.total_variance == original.pca.total_variance);

    // identical predictions on 100 random queries, bit for bit
    Rng rng(81);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> q(static_cast<std::size_t>(original.pca.rank));
        for (double& v : q) v = rng.uniform(-3, 3);
        const auto a = grnn::predict(original.grnn, q);
        const auto b = grnn::predict(copy.grnn, q);
        CHECK(a.value == b.value);
        CHECK(a.density == b.density);
    }

    // a second serialization of the copy is byte-identical
    CHECK(bundle::serialize(copy) == bytes);
}

TEST_CASE("save/load via file") {
    const auto original = trained_bundle();
    const auto path = std::filesystem::temp_directory_path() / "rotodet_test_model.rdm";
    bundle::save(original, path);
    const auto copy = bundle::load(path);
    CHECK(bundle::serialize(copy) == bundle::serialize(original));
    std::filesystem::remove(path);
}

TEST_CASE("corrupt inputs are rejected with CorruptModel") {
    const auto bytes = bundle::serialize(trained_bundle());

    // bad magic
    auto wrong = bytes;
    wrong[2] = 'X';
    CHECK_THROWS_AS(bundle::deserialize(wrong), CorruptModel);

    // truncated payload
    auto cut = bytes;
    cut.resize(cut.size() - 16);
    CHECK_THROWS_AS(bundle::deserialize(cut), CorruptModel);

    // no header line at all
    std::vector<unsigned char> garbage = {'n', 'o', 'p', 'e'};
    CHECK_THROWS_AS(bundle::deserialize(garbage), CorruptModel);

    // header not JSON
    std::vector<unsigned char> badjson = {'{', 'o', 'o', 'p', 's', '\n'};
    CHECK_THROWS_AS(bundle::deserialize(badjson), CorruptModel);

    // header JSON but inconsistent dimensions
    auto tampered = bytes;
    const std::string head(tampered.begin(),
                           std::find(tampered.begin(), tampered.end(),
                                     static_cast<unsigned char>('\n')));
    const auto pos = head.find("\"window\":15");
    if (pos != std::string::npos) {
        tampered[pos + 10] = '9'; // window 95 vs pca.d untouched
        CHECK_THROWS_AS(bundle::deserialize(tampered), CorruptModel);
    }
}

TEST_CASE("validate rejects mismatched component dimensions") {
    auto b = trained_bundle();
    b.window = 16;
    CHECK_THROWS_AS(bundle::validate(b), ModelMismatch);
}

TEST_CASE("missing model file raises IoFailure") {
    CHECK_THROWS_AS(bundle::load("/nonexistent/rotodet.rdm"), IoFailure);
}
