#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cedrf/drf.hpp"
#include "cedrf/error.hpp"
#include "cedrf/oracle.hpp"
#include "cedrf/random_models.hpp"

using namespace cedrf;

namespace {

ObservationModel example() { return ObservationModel(Matrix{{std::sqrt(20.0), 0.0}, {0.0, std::sqrt(0.5)}}, 1.0); }

}  // namespace

TEST(MatrixForm, ExampleMatchesClosedForm) {
    const auto m = example();
    for (double r : {0.0, 0.5, 1.0, 2.0, 3.0, 8.0}) EXPECT_NEAR(ce_matrix_form(m, r), ce_drf(m, r), 1e-12);
}

TEST(MatrixForm, PartsAreConsistent) {
    const auto parts = ce_matrix_parts(example(), 3.0);
    EXPECT_EQ(parts.k, 2u);
    // Both components active: D_l = theta.
    EXPECT_NEAR(parts.D(0, 0), parts.theta, 1e-15);
    EXPECT_NEAR(parts.D(1, 1), parts.theta, 1e-15);
    // rates sum to R: prod (1 - J_l) = 2^{-2R}.
    EXPECT_NEAR((1.0 - parts.J(0, 0)) * (1.0 - parts.J(1, 1)), std::exp2(-6.0), 1e-14);
    const auto low = ce_matrix_parts(example(), 1.0);
    EXPECT_EQ(low.k, 1u);
    EXPECT_EQ(low.J(1, 1), 0.0);
}

TEST(MatrixForm, RandomModelsAcrossShapes) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> rate(0.0, 10.0);
    for (int t = 0; t < 300; ++t) {
        const std::size_t L = 1 + t % 6;
        const std::size_t M = 1 + (t / 6) % 6;
        const auto m = random_model(rng, L, M);
        const double r = rate(rng);
        EXPECT_NEAR(ce_matrix_form(m, r), ce_drf(m, r), 1e-9) << "L=" << L << " M=" << M << " R=" << r;
    }
}

TEST(MatrixForm, RankDeficientModels) {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 50; ++t) {
        const auto m = random_rank_deficient_model(rng, 5, 4, 1 + t % 3);
        for (double r : {0.3, 1.7, 4.0, 9.0}) EXPECT_NEAR(ce_matrix_form(m, r), ce_drf(m, r), 1e-9);
    }
}

TEST(MonteCarlo, RejectsZeroSamples) {
    EXPECT_THROW(mc_ce(example(), 1.0, 0, 1), InvalidSampleCount);
    EXPECT_THROW(mc_idrf(example(), 1.0, 0, 1), InvalidSampleCount);
    EXPECT_THROW(mc_mmse(example(), 0, 1), InvalidSampleCount);
}

TEST(MonteCarlo, ExampleWithinFourStandardErrors) {
    const auto m = example();
    const std::size_t n = 200'000;
    for (double r : {0.5, 1.0, 3.0}) {
        const auto ce = mc_ce(m, r, n, 5);
        const auto opt = mc_idrf(m, r, n, 6);
        EXPECT_LE(std::abs(ce.mean - ce_drf(m, r)), std::max(4.0 * ce.std_error, 1e-3)) << r;
        EXPECT_LE(std::abs(opt.mean - idrf(m, r)), std::max(4.0 * opt.std_error, 1e-3)) << r;
    }
    const auto mm = mc_mmse(m, n, 7);
    EXPECT_LE(std::abs(mm.mean - 0.35714285714285714), std::max(4.0 * mm.std_error, 1e-3));
}

TEST(MonteCarlo, PureNoiseComponents) {
    // L > M, and a model whose conditional spectrum is empty.
    const ObservationModel tall(Matrix{{1.0}, {0.5}, {0.0}}, 1.0);
    const auto e = mc_idrf(tall, 2.0, 100'000, 3);
    EXPECT_LE(std::abs(e.mean - idrf(tall, 2.0)), std::max(4.0 * e.std_error, 1e-3));
    const ObservationModel zero(Matrix(2, 2), 1.0);
    const auto z = mc_idrf(zero, 2.0, 50'000, 3);
    EXPECT_LE(std::abs(z.mean - 1.0), std::max(4.0 * z.std_error, 1e-3));
    const auto c = mc_ce(zero, 2.0, 50'000, 3);
    EXPECT_LE(std::abs(c.mean - 1.0), std::max(4.0 * c.std_error, 1e-3));
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
    const auto m = example();
    const std::size_t n = 3 * kMcChunkSize + 17;
    const auto a = mc_ce(m, 1.3, n, 99, McOptions{1});
    const auto b = mc_ce(m, 1.3, n, 99, McOptions{4});
    const auto c = mc_ce(m, 1.3, n, 99, McOptions{0});
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    EXPECT_EQ(mc_idrf(m, 1.3, n, 99, McOptions{1}), mc_idrf(m, 1.3, n, 99, McOptions{3}));
    EXPECT_EQ(mc_mmse(m, n, 99, McOptions{1}), mc_mmse(m, n, 99, McOptions{8}));
    EXPECT_EQ(a.n_samples, n);
    EXPECT_EQ(a.seed, 99u);
}

TEST(MonteCarlo, SeedChangesEstimate) {
    const auto m = example();
    EXPECT_NE(mc_ce(m, 1.0, 5000, 1).mean, mc_ce(m, 1.0, 5000, 2).mean);
}

TEST(MonteCarlo, StandardErrorShrinksWithSamples) {
    const auto m = example();
    const auto small = mc_ce(m, 1.0, 10'000, 4);
    const auto large = mc_ce(m, 1.0, 160'000, 4);
    EXPECT_LT(large.std_error, small.std_error * 0.5);
}
