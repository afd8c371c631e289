#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rotodet/pca.hpp"
#include "rotodet/rng.hpp"

using namespace rotodet;

namespace {

Matrix random_samples(Rng& rng, int m, int d) {
    Matrix s(m, d);
    for (double& v : s.data()) v = rng.uniform(-1, 1);
    return s;
}

void fix_column_signs(Matrix& basis) {
    for (int c = 0; c < basis.cols(); ++c) {
        int arg = 0;
        double best = std::fabs(basis(0, c));
        for (int r = 1; r < basis.rows(); ++r)
            if (std::fabs(basis(r, c)) > best) {
                best = std::fabs(basis(r, c));
                arg = r;
            }
        if (basis(arg, c) < 0.0)
            for (int r = 0; r < basis.rows(); ++r) basis(r, c) = -basis(r, c);
    }
}

void check_orthonormal_and_signed(const pca::PcaModel& model) {
    for (int a = 0; a < model.rank; ++a) {
        for (int b = 0; b < model.rank; ++b) {
            double dot = 0.0;
            for (int r = 0; r < model.dim; ++r) dot += model.basis(r, a) * model.basis(r, b);
            CHECK(std::fabs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
        }
        int arg = 0;
        double best = std::fabs(model.basis(0, a));
        for (int r = 1; r < model.dim; ++r)
            if (std::fabs(model.basis(r, a)) > best) {
                best = std::fabs(model.basis(r, a));
                arg = r;
            }
        CHECK(model.basis(arg, a) >= 0.0);
    }
    for (std::size_t i = 1; i < model.eigenvalues.size(); ++i)
        CHECK(model.eigenvalues[i] <= model.eigenvalues[i - 1] + 1e-12);
    for (double ev : model.eigenvalues) CHECK(ev >= 0.0);
}

} // namespace

TEST_CASE("two-point dataset has the hand-computed decomposition") {
    Matrix samples = Matrix::from_data(2, 2, {0, 0, 2, 2});
    const auto model = pca::fit(samples, 1);
    CHECK(model.mean[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.mean[1] == doctest::Approx(1.0).epsilon(1e-12));
    // covariance [[2,2],[2,2]] has eigenvalues {4, 0}
    CHECK(model.eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-10));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(model.basis(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-10));
    CHECK(model.basis(1, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-10));
    check_orthonormal_and_signed(model);

    // transform examples: the mean maps to zero, (2,2) maps to sqrt(2)
    const double mean_like[] = {1.0, 1.0};
    for (double v : pca::transform(model, mean_like)) CHECK(std::fabs(v) < 1e-12);
    const double far[] = {2.0, 2.0};
    const auto y = pca::transform(model, far);
    CHECK(y[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

    const auto ratios = pca::explained_variance_ratio(model);
    CHECK(ratios[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identical samples give zero eigenvalues and canonical axes") {
    Matrix samples(5, 4);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 4; ++j) samples(i, j) = 0.77;
    const auto model = pca::fit(samples, 3);
    for (double ev : model.eigenvalues) CHECK(ev == 0.0);
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 4; ++r)
            CHECK(model.basis(r, c) == doctest::Approx(r == c ? 1.0 : 0.0).epsilon(1e-12));
    check_orthonormal_and_signed(model);
}

TEST_CASE("fit rejects bad ranks and tiny datasets") {
    Rng rng(31);
    const Matrix samples = random_samples(rng, 6, 4);
    CHECK_THROWS_AS(pca::fit(samples, 5), RankTooHigh);
    CHECK_THROWS_AS(pca::fit(samples, 0), RankTooHigh);
    CHECK_THROWS_AS(pca::fit(random_samples(rng, 1, 4), 1), TooFewSamples);
    CHECK_THROWS_AS(pca::fit(random_samples(rng, 3, 8), 3), RankTooHigh); // k > m-1
}

TEST_CASE("fit matches the classical-Jacobi oracle on random data") {
    Rng rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix samples = random_samples(rng, 20, 8);
        const auto model = pca::fit(samples, 8);
        check_orthonormal_and_signed(model);

        std::vector<double> oracle_vals;
        Matrix oracle_vecs;
        oracles::jacobi_classical(oracles::covariance(samples), oracle_vals, oracle_vecs);
        fix_column_signs(oracle_vecs);
        for (int c = 0; c < 8; ++c) {
            CHECK(model.eigenvalues[c] == doctest::Approx(oracle_vals[c]).epsilon(1e-6));
            for (int r = 0; r < 8; ++r)
                CHECK(model.basis(r, c) == doctest::Approx(oracle_vecs(r, c)).epsilon(1e-6));
        }
    }
}

TEST_CASE("transform of a training sample equals direct centered projection") {
    Rng rng(33);
    const Matrix samples = random_samples(rng, 10, 6);
    const auto model = pca::fit(samples, 4);
    const auto y = pca::transform(model, samples.row(3));
    for (int c = 0; c < 4; ++c) {
        double expect = 0.0;
        for (int r = 0; r < 6; ++r)
            expect += model.basis(r, c) * (samples(3, r) - model.mean[r]);
        CHECK(y[c] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("inverse_transform identities") {
    Rng rng(34);
    const Matrix samples = random_samples(rng, 12, 5);
    const auto model = pca::fit(samples, 5); // full rank for 5-dim data
    check_orthonormal_and_signed(model);

    const std::vector<double> zero(5, 0.0);
    const auto back = pca::inverse_transform(model, zero);
    for (int r = 0; r < 5; ++r) CHECK(back[r] == doctest::Approx(model.mean[r]).epsilon(1e-15));

    for (int i = 0; i < 12; ++i) {
        const auto y = pca::transform(model, samples.row(i));
        const auto x = pca::inverse_transform(model, y);
        double err2 = 0.0, centered2 = 0.0, proj2 = 0.0;
        for (int r = 0; r < 5; ++r) {
            err2 += (x[r] - samples(i, r)) * (x[r] - samples(i, r));
            const double c = samples(i, r) - model.mean[r];
            centered2 += c * c;
        }
        for (double v : y) proj2 += v * v;
        CHECK(err2 < 1e-8); // x is in the training span at full rank
        CHECK(err2 == doctest::Approx(centered2 - proj2).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("reconstruction error follows the Pythagorean identity at reduced rank") {
    Rng rng(35);
    const Matrix samples = random_samples(rng, 30, 8);
    const auto model = pca::fit(samples, 3);
    for (int i = 0; i < 30; ++i) {
        const auto y = pca::transform(model, samples.row(i));
        const auto x = pca::inverse_transform(model, y);
        double err2 = 0.0, centered2 = 0.0, proj2 = 0.0;
        for (int r = 0; r < 8; ++r) {
            err2 += (x[r] - samples(i, r)) * (x[r] - samples(i, r));
            const double c = samples(i, r) - model.mean[r];
            centered2 += c * c;
        }
        for (double v : y) proj2 += v * v;
        CHECK(err2 == doctest::Approx(centered2 - proj2).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("explained variance ratios") {
    // isotropic 4-dim data: each of the four ratios is about 1/4
    Rng rng(36);
    Matrix samples(10000, 4);
    for (double& v : samples.data()) v = rng.gaussian();
    const auto model = pca::fit(samples, 4);
    const auto ratios = pca::explained_variance_ratio(model);
    double sum = 0.0;
    for (double r : ratios) {
        CHECK(r == doctest::Approx(0.25).epsilon(0.2)); // +-0.05 absolute
        CHECK(std::fabs(r - 0.25) < 0.05);
        sum += r;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9)); // full-rank trace identity
}

TEST_CASE("projection variances equal the eigenvalues") {
    Rng rng(37);
    const Matrix samples = random_samples(rng, 40, 6);
    const auto model = pca::fit(samples, 6);
    for (int c = 0; c < 6; ++c) {
        double mean = 0.0;
        std::vector<double> proj(40);
        for (int i = 0; i < 40; ++i) {
            proj[i] = pca::transform(model, samples.row(i))[c];
            mean += proj[i];
        }
        mean /= 40.0;
        double var = 0.0;
        for (double v : proj) var += (v - mean) * (v - mean);
        var /= 39.0; // divisor m-1, as in the covariance
        CHECK(var == doctest::Approx(model.eigenvalues[c]).epsilon(1e-6));
    }
}

TEST_CASE("Gram-trick fit agrees with an explicit covariance fit at d=225, m=30") {
    Rng rng(38);
    const Matrix samples = random_samples(rng, 30, 225);
    const auto model = pca::fit(samples, 10); // d > m forces the Gram route
    check_orthonormal_and_signed(model);

    std::vector<double> oracle_vals;
    Matrix oracle_vecs;
    oracles::jacobi_classical(oracles::covariance(samples), oracle_vals, oracle_vecs);
    fix_column_signs(oracle_vecs);
    for (int c = 0; c < 10; ++c) {
        CHECK(model.eigenvalues[c] == doctest::Approx(oracle_vals[c]).epsilon(1e-6));
        for (int r = 0; r < 225; ++r)
            CHECK(std::fabs(model.basis(r, c) - oracle_vecs(r, c)) < 1e-6);
    }
}

TEST_CASE("top component maximizes projected variance") {
    Rng rng(39);
    // anisotropic data so the top axis is clearly defined
    Matrix samples(60, 5);
    for (int i = 0; i < 60; ++i)
        for (int j = 0; j < 5; ++j)
            samples(i, j) = rng.gaussian() * (j == 0 ? 3.0 : 0.5) + (j == 1 ? 0.3 : 0.0);
    const auto model = pca::fit(samples, 5);

    const auto variance_along = [&](std::span<const double> dir) {
        std::vector<double> proj(60);
        double mean = 0.0;
        for (int i = 0; i < 60; ++i) {
            double v = 0.0;
            for (int j = 0; j < 5; ++j) v += samples(i, j) * dir[j];
            proj[i] = v;
            mean += v;
        }
        mean /= 60.0;
        double var = 0.0;
        for (double v : proj) var += (v - mean) * (v - mean);
        return var / 59.0;
    };

    std::vector<double> top(5);
    for (int j = 0; j < 5; ++j) top[j] = model.basis(j, 0);
    const double top_var = variance_along(top);

    for (int trial = 0; trial < 100; ++trial) {
        // random unit vector orthogonal to the top component
        std::vector<double> u(5);
        for (double& v : u) v = rng.gaussian();
        double dot = 0.0;
        for (int j = 0; j < 5; ++j) dot += u[j] * top[j];
        for (int j = 0; j < 5; ++j) u[j] -= dot * top[j];
        double norm = 0.0;
        for (double v : u) norm += v * v;
        norm = std::sqrt(norm);
        if (norm < 1e-6) continue;
        for (double& v : u) v /= norm;
        CHECK(variance_along(u) <= top_var + 1e-9);
    }
}

TEST_CASE("truncate keeps the leading components") {
    Rng rng(40);
    const Matrix samples = random_samples(rng, 20, 6);
    const auto full = pca::fit(samples, 5);
    const auto cut = pca::truncate(full, 2);
    CHECK(cut.rank == 2);
    CHECK(cut.total_variance == full.total_variance);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 2; ++c) CHECK(cut.basis(r, c) == full.basis(r, c));
    CHECK_THROWS_AS(pca::truncate(full, 6), RankTooHigh);
}

TEST_CASE("pick_rank_by_variance") {
    pca::PcaModel model;
    model.eigenvalues = {6.0, 3.0, 0.9, 0.1};
    model.total_variance = 10.0;
    CHECK(pca::pick_rank_by_variance(model, 0.95, 40) == 3); // 0.6, 0.9, 0.99
    CHECK(pca::pick_rank_by_variance(model, 0.5, 40) == 1);
    CHECK(pca::pick_rank_by_variance(model, 0.9999, 2) == 2); // cap wins
}
