#pragma once

#include <cstddef>
#include <cstdint>

#include "cedrf/spectral.hpp"

namespace cedrf {

/// Forward-channel matrices of the CE scheme: Yhat = P X + eta with
/// eta = J U^T W + J^{1/2} D^{1/2} N.
struct CEMatrixParts {
    Matrix U;          ///< L x L, eigenvectors of A A^T (descending, sign-fixed)
    Matrix J;          ///< diag(1 - 2^{-2 R_l})
    Matrix D;          ///< diag(min(lambda_l + sigma2, theta))
    Matrix P;          ///< J U^T A
    Matrix Sigma_eta;  ///< sigma2 J^2 + J D
    std::size_t k = 1;
    double theta = 0.0;
};

CEMatrixParts ce_matrix_parts(const ObservationModel& model, double rate);

/// D_CE as the normalized trace (1/M) Tr(I - P^T (P P^T + Sigma_eta)^+ P).
/// Independent of the closed form in drf.hpp.
double ce_matrix_form(const ObservationModel& model, double rate);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  ///< standard error of the mean
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const McEstimate&, const McEstimate&) = default;
};

/// Monte Carlo execution settings. Output depends only on (n_samples, seed):
/// samples are split into fixed chunks, chunk c draws from mt19937_64 seeded
/// with seed_seq{seed, c}, and chunk statistics are merged in chunk order.
struct McOptions {
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

inline constexpr std::size_t kMcChunkSize = 4096;

/// Simulates the CE forward channel and the linear MMSE decoder
/// X^ = P^T (P P^T + Sigma_eta)^+ Yhat.
McEstimate mc_ce(const ObservationModel& model, double rate, std::size_t n_samples, std::uint64_t seed,
                 McOptions options = {});

/// Simulates estimate-then-compress: X~ = E[X|Y], Gaussian forward test
/// channels along the eigenvectors of Sigma_{X|Y} at the water level.
McEstimate mc_idrf(const ObservationModel& model, double rate, std::size_t n_samples, std::uint64_t seed,
                   McOptions options = {});

/// Empirical (1/M) |X - E[X|Y]|^2.
McEstimate mc_mmse(const ObservationModel& model, std::size_t n_samples, std::uint64_t seed,
                   McOptions options = {});

}  // namespace cedrf
