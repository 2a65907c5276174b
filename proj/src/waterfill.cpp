#include "cedrf/waterfill.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cedrf/error.hpp"

namespace cedrf {

namespace {

void require_rate(double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw InvalidArgument("rate must be finite and non-negative, got " + std::to_string(rate));
    }
}

}  // namespace

std::vector<double> rate_thresholds(const Spectrum& spec) {
    if (spec.rank == 0) throw EmptySpectrum("rate thresholds need a spectrum of rank >= 1");
    std::vector<double> out;
    out.reserve(spec.rank + 1);
    out.push_back(0.0);
    for (std::size_t k = 2; k <= spec.rank; ++k) {
        const double bottom = spec.values[k - 1];
        double sum = 0.0;
        for (std::size_t l = 0; l < k; ++l) sum += std::log2(spec.values[l] / bottom);
        out.push_back(0.5 * sum);
    }
    out.push_back(std::numeric_limits<double>::infinity());
    return out;
}

std::size_t active_count(const Spectrum& spec, double rate) {
    require_rate(rate);
    const auto thresholds = rate_thresholds(spec);
    const double slack = kThresholdSlack * std::max(1.0, rate);
    std::size_t k = 1;
    // thresholds[j - 1] is R_j; take the largest j with R_j < R.
    for (std::size_t j = 2; j <= spec.rank; ++j) {
        if (thresholds[j - 1] < rate - slack) k = j;
        else break;
    }
    return k;
}

double leading_geometric_mean(const Spectrum& spec, std::size_t k) {
    if (k > 20) {
        double log_sum = 0.0;
        for (std::size_t l = 0; l < k; ++l) log_sum += std::log(spec.values[l]);
        return std::exp(log_sum / static_cast<double>(k));
    }
    double prod = 1.0;
    for (std::size_t l = 0; l < k; ++l) prod *= spec.values[l];
    return std::pow(prod, 1.0 / static_cast<double>(k));
}

WaterLevel water_level(const Spectrum& spec, double rate) {
    const std::size_t k = active_count(spec, rate);
    const double theta = std::exp2(-2.0 * rate / static_cast<double>(k)) * leading_geometric_mean(spec, k);
    return {k, theta};
}

WaterfillResult rate_allocation(const Spectrum& spec, double rate) {
    const auto level = water_level(spec, rate);
    WaterfillResult out;
    out.k = level.k;
    out.theta = level.theta;
    out.rates.assign(spec.size(), 0.0);
    out.distortions.assign(spec.size(), 0.0);
    for (std::size_t l = 0; l < spec.size(); ++l) {
        const double v = spec.values[l];
        out.distortions[l] = std::min(v, level.theta);
        if (l < level.k && l < spec.rank) out.rates[l] = std::max(0.0, 0.5 * std::log2(v / level.theta));
    }
    return out;
}

}  // namespace cedrf
