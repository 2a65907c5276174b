#pragma once

#include <cstddef>
#include <vector>

#include "cedrf/linalg.hpp"

namespace cedrf {

using linalg::Matrix;

/// Gaussian observation model Y = A X + Z with X ~ N(0, I_M) and
/// Z ~ N(0, sigma2 I_L).
class ObservationModel {
public:
    /// Throws InvalidModel when A is empty or sigma2 is not a positive finite number.
    ObservationModel(Matrix a, double sigma2);

    [[nodiscard]] const Matrix& A() const noexcept { return a_; }
    [[nodiscard]] double sigma2() const noexcept { return sigma2_; }
    /// Source dimension.
    [[nodiscard]] std::size_t M() const noexcept { return a_.cols(); }
    /// Observation dimension.
    [[nodiscard]] std::size_t L() const noexcept { return a_.rows(); }
    [[nodiscard]] std::size_t r() const noexcept { return M() < L() ? M() : L(); }
    /// Whether A has numerical rank r. Rank-deficient models are still valid.
    [[nodiscard]] bool full_rank() const noexcept { return full_rank_; }

private:
    Matrix a_;
    double sigma2_;
    bool full_rank_ = false;
};

/// Non-increasing, non-negative eigenvalue list with its numerical rank.
struct Spectrum {
    std::vector<double> values;
    std::size_t rank = 0;

    /// Validates ordering and sign, and counts the values above the rank
    /// tolerance. Throws InvalidArgument on unsorted or negative input.
    static Spectrum from_values(std::vector<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] double largest() const noexcept { return values.empty() ? 0.0 : values.front(); }
};

inline constexpr double kRankRelTolerance = 1e-10;
inline constexpr double kRankAbsTolerance = 1e-14;

/// True when `value` counts as zero relative to `largest`.
[[nodiscard]] bool is_numerically_zero(double value, double largest) noexcept;

/// Eigenvalues of A A^T in descending order (length L). Round-off negatives
/// and values under the rank tolerance are snapped to exactly 0.
Spectrum gram_spectrum(const ObservationModel& model);

/// Spectrum of Sigma_Y: lambda_l + sigma2. Rank is always L.
Spectrum observation_spectrum(const Spectrum& gram, double sigma2);

/// Spectrum of Sigma_{X|Y} (equivalently of the MMSE estimate's covariance):
/// lambda_l / (lambda_l + sigma2). Rank equals the gram rank.
Spectrum conditional_spectrum(const Spectrum& gram, double sigma2);

/// 1 - (1/M) sum_l lambda_l / (lambda_l + sigma2).
double mmse_floor(const Spectrum& gram, double sigma2, std::size_t M);

/// Everything the closed forms need: the gram spectrum plus sigma2 and the
/// two dimensions. Matrices are not needed past this point.
struct SpectralModel {
    Spectrum gram;
    double sigma2 = 1.0;
    std::size_t M = 0;
    std::size_t L = 0;

    /// Builds from descending gram eigenvalues (L = values.size()). Throws
    /// InvalidModel when sigma2 <= 0, M == 0, or more than min(M, L) values
    /// are nonzero.
    static SpectralModel from_gram(std::vector<double> gram_values, double sigma2, std::size_t M);

    [[nodiscard]] Spectrum observation() const { return observation_spectrum(gram, sigma2); }
    [[nodiscard]] Spectrum conditional() const { return conditional_spectrum(gram, sigma2); }
    [[nodiscard]] double mmse() const { return mmse_floor(gram, sigma2, M); }
    /// i-th gram eigenvalue (0-based), or 0 beyond the stored list.
    [[nodiscard]] double lambda(std::size_t i) const noexcept {
        return i < gram.values.size() ? gram.values[i] : 0.0;
    }
};

SpectralModel spectral_model(const ObservationModel& model);

/// Symmetric PD square root via eigendecomposition. Throws
/// NotPositiveDefinite when the smallest eigenvalue is under the rank
/// tolerance.
Matrix sym_sqrt_pd(const Matrix& s);

/// Reduces a source with covariance sigma_x to the identity-covariance case:
/// returns the model with A' = A sigma_x^{1/2}. Distortions computed on the
/// result are measured on the whitened source sigma_x^{-1/2} X.
ObservationModel whiten(const Matrix& sigma_x, const Matrix& a, double sigma2);

}  // namespace cedrf
