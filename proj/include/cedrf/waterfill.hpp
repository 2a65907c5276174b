#pragma once

#include <cstddef>
#include <vector>

#include "cedrf/spectral.hpp"

namespace cedrf {

/// Reverse water-filling over a spectrum at total rate R (bits).
struct WaterfillResult {
    std::size_t k = 1;               ///< active component count
    double theta = 0.0;              ///< water level
    std::vector<double> rates;       ///< per component, sums to R
    std::vector<double> distortions; ///< min(values[l], theta)
};

/// Slack used when comparing a rate against a computed threshold.
inline constexpr double kThresholdSlack = 1e-12;

/// Activation thresholds [R_1, ..., R_rank, +inf]: R_1 = 0 and
/// R_k = 1/2 sum_{l<=k} log2(values[l] / values[k]). Throws EmptySpectrum
/// when the spectrum has rank 0.
std::vector<double> rate_thresholds(const Spectrum& spec);

/// Number of active components k, i.e. R in (R_k, R_{k+1}]. R = 0 maps to 1.
/// Equal eigenvalues activate together.
std::size_t active_count(const Spectrum& spec, double rate);

/// Geometric mean of the first k values, evaluated in log space for k > 20.
double leading_geometric_mean(const Spectrum& spec, std::size_t k);

struct WaterLevel {
    std::size_t k;
    double theta;
};

/// theta_k = 2^{-2R/k} (prod_{l<=k} values[l])^{1/k} with k = active_count.
WaterLevel water_level(const Spectrum& spec, double rate);

/// Per-component rates 1/2 log2+(values[l] / theta) and distortions.
WaterfillResult rate_allocation(const Spectrum& spec, double rate);

}  // namespace cedrf
