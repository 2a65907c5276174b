#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cedrf/error.hpp"
#include "cedrf/random_models.hpp"
#include "cedrf/spectral.hpp"

using namespace cedrf;

TEST(ObservationModel, RejectsBadInput) {
    EXPECT_THROW(ObservationModel(Matrix(0, 0), 1.0), InvalidModel);
    EXPECT_THROW(ObservationModel(Matrix::identity(2), 0.0), InvalidModel);
    EXPECT_THROW(ObservationModel(Matrix::identity(2), -1.0), InvalidModel);
    EXPECT_THROW(ObservationModel(Matrix::identity(2), std::numeric_limits<double>::infinity()), InvalidModel);
    EXPECT_THROW(ObservationModel(Matrix::identity(2), std::numeric_limits<double>::quiet_NaN()), InvalidModel);
}

TEST(ObservationModel, Dimensions) {
    const ObservationModel m(Matrix(3, 5), 1.0);
    EXPECT_EQ(m.L(), 3u);
    EXPECT_EQ(m.M(), 5u);
    EXPECT_EQ(m.r(), 3u);
    EXPECT_FALSE(m.full_rank());
    EXPECT_TRUE(ObservationModel(Matrix::identity(2), 1.0).full_rank());
}

TEST(Spectrum, DiagonalExampleSpectra) {
    const ObservationModel m(Matrix{{std::sqrt(20.0), 0.0}, {0.0, std::sqrt(0.5)}}, 1.0);
    const auto g = gram_spectrum(m);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_NEAR(g.values[0], 20.0, 1e-13);
    EXPECT_NEAR(g.values[1], 0.5, 1e-14);
    EXPECT_EQ(g.rank, 2u);

    const auto y = observation_spectrum(g, 1.0);
    EXPECT_NEAR(y.values[0], 21.0, 1e-13);
    EXPECT_NEAR(y.values[1], 1.5, 1e-14);

    const auto c = conditional_spectrum(g, 1.0);
    EXPECT_NEAR(c.values[0], 20.0 / 21.0, 1e-14);
    EXPECT_NEAR(c.values[1], 1.0 / 3.0, 1e-14);

    EXPECT_NEAR(mmse_floor(g, 1.0, 2), 0.35714285714285714, 1e-14);
}

TEST(Spectrum, ScalarMmse) {
    const auto g = gram_spectrum(ObservationModel(Matrix{{1.0}}, 1.0));
    EXPECT_DOUBLE_EQ(mmse_floor(g, 1.0, 1), 0.5);
}

TEST(Spectrum, RankDeficientGramIsSnappedToZero) {
    const ObservationModel m(Matrix{{1.0, 2.0}, {2.0, 4.0}}, 1.0);
    const auto g = gram_spectrum(m);
    EXPECT_EQ(g.rank, 1u);
    EXPECT_EQ(g.values[1], 0.0);
    EXPECT_NEAR(g.values[0], 25.0, 1e-12);
    EXPECT_EQ(observation_spectrum(g, 1.0).rank, 2u);
    EXPECT_EQ(conditional_spectrum(g, 1.0).rank, 1u);
}

TEST(Spectrum, WideModelHasLengthL) {
    // L < M: A A^T is L x L.
    const ObservationModel m(Matrix{{1.0, 1.0, 1.0}}, 1.0);
    const auto g = gram_spectrum(m);
    ASSERT_EQ(g.size(), 1u);
    EXPECT_NEAR(g.values[0], 3.0, 1e-14);
}

TEST(Spectrum, TallModelHasTrailingZeros) {
    // L > M: at most M nonzero eigenvalues.
    const ObservationModel m(Matrix{{1.0}, {1.0}, {1.0}}, 2.0);
    const auto g = gram_spectrum(m);
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g.rank, 1u);
    EXPECT_NEAR(g.values[0], 3.0, 1e-14);
    EXPECT_EQ(g.values[1], 0.0);
    EXPECT_EQ(g.values[2], 0.0);
}

TEST(Spectrum, FromValuesValidates) {
    EXPECT_THROW(Spectrum::from_values({1.0, 2.0}), InvalidArgument);
    EXPECT_THROW(Spectrum::from_values({1.0, -1.0}), InvalidArgument);
    EXPECT_EQ(Spectrum::from_values({2.0, 1.0, 0.0}).rank, 2u);
}

TEST(SpectralModel, FromGramValidates) {
    EXPECT_THROW(SpectralModel::from_gram({2.0, 1.0}, 0.0, 2), InvalidModel);
    EXPECT_THROW(SpectralModel::from_gram({2.0, 1.0}, 1.0, 0), InvalidModel);
    EXPECT_THROW(SpectralModel::from_gram({2.0, 1.0}, 1.0, 1), InvalidModel);
    const auto m = SpectralModel::from_gram({2.0, 0.0}, 1.0, 1);
    EXPECT_EQ(m.L, 2u);
    EXPECT_EQ(m.lambda(5), 0.0);
}

TEST(SpectralProperties, RandomModels) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 300; ++t) {
        const auto model = random_model(rng);
        const auto s = spectral_model(model);
        const auto y = s.observation();
        const auto c = s.conditional();
        EXPECT_EQ(y.rank, s.L);
        EXPECT_LE(s.gram.rank, model.r());
        double trace_aat = 0.0;
        for (double a : model.A().data()) trace_aat += a * a;
        double sum = 0.0;
        for (std::size_t i = 0; i < s.L; ++i) {
            sum += s.gram.values[i];
            EXPECT_GE(s.gram.values[i], 0.0);
            if (i > 0) {
                EXPECT_GE(s.gram.values[i - 1], s.gram.values[i]);
                EXPECT_GE(c.values[i - 1], c.values[i]);
            }
            EXPECT_GE(c.values[i], 0.0);
            EXPECT_LT(c.values[i], 1.0);
            EXPECT_NEAR(y.values[i], s.gram.values[i] + s.sigma2, 1e-12 * y.values[i]);
        }
        EXPECT_NEAR(sum, trace_aat, 1e-9 * std::max(1.0, trace_aat));
        const double mmse = s.mmse();
        EXPECT_GT(mmse, 0.0);
        EXPECT_LE(mmse, 1.0);
    }
}

TEST(Whitening, ScaledIdentityCovariance) {
    // Sigma_X = 4 I with A gives the same spectra as 2A with Sigma_X = I.
    const Matrix a{{1.0, 0.5}, {-0.3, 2.0}, {0.7, 0.1}};
    const auto w = whiten(Matrix{{4.0, 0.0}, {0.0, 4.0}}, a, 0.5);
    const auto g1 = gram_spectrum(w);
    const auto g2 = gram_spectrum(ObservationModel(a * 2.0, 0.5));
    for (std::size_t i = 0; i < g1.size(); ++i) EXPECT_NEAR(g1.values[i], g2.values[i], 1e-12);
}

TEST(Whitening, RejectsNonPositiveDefinite) {
    EXPECT_THROW(sym_sqrt_pd(Matrix{{1.0, 0.0}, {0.0, 0.0}}), NotPositiveDefinite);
    EXPECT_THROW(sym_sqrt_pd(Matrix{{1.0, 2.0}, {2.0, 1.0}}), NotPositiveDefinite);
    const Matrix r = sym_sqrt_pd(Matrix{{2.0, 1.0}, {1.0, 2.0}});
    EXPECT_LT(linalg::frobenius_norm(r * r - Matrix{{2.0, 1.0}, {1.0, 2.0}}), 1e-14);
}

TEST(RandomModels, RankDeficientHasRequestedRank) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        const auto m = random_rank_deficient_model(rng, 5, 4, 2);
        EXPECT_EQ(gram_spectrum(m).rank, 2u);
        EXPECT_FALSE(m.full_rank());
    }
}
