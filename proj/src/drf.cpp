#include "cedrf/drf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cedrf/error.hpp"

namespace cedrf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_rate(double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw InvalidArgument("rate must be finite and non-negative, got " + std::to_string(rate));
    }
}

// lambda / (lambda + sigma2)^2: the per-component weight the CE decoder
// attaches to the encoder's water level.
double ce_weight(double lambda, double sigma2) {
    const double y = lambda + sigma2;
    return lambda / (y * y);
}

// R_j for a 1-based index j; +inf past the rank.
double threshold_at(const Spectrum& spec, std::size_t j) {
    if (j > spec.rank) return kInf;
    return rate_thresholds(spec)[j - 1];
}

double explained_variance(const SpectralModel& model, std::size_t k) {
    double sum = 0.0;
    for (std::size_t l = 0; l < k; ++l) sum += model.lambda(l) / (model.lambda(l) + model.sigma2);
    return sum;
}

void require_condition_2d(double lambda1, double lambda2, double sigma2) {
    if (!(std::isfinite(sigma2) && sigma2 > 0.0)) throw InvalidModel("sigma2 must be positive and finite");
    if (!(lambda1 >= lambda2 && lambda2 >= 0.0) || !std::isfinite(lambda1)) {
        throw InvalidArgument("2x2 eigenvalues must satisfy lambda1 >= lambda2 >= 0");
    }
    const double w1 = ce_weight(lambda1, sigma2);
    const double w2 = ce_weight(lambda2, sigma2);
    if (w1 > w2 + kEqualityTolerance * std::max(w1, w2)) {
        throw ConditionViolated("2x2 gap requires lambda1/(lambda1+s2)^2 <= lambda2/(lambda2+s2)^2");
    }
}

struct IdrfEval {
    double d;
    std::size_t k;
    double theta;
};

IdrfEval idrf_eval(const SpectralModel& model, double rate) {
    require_rate(rate);
    const Spectrum cond = model.conditional();
    if (cond.rank == 0) return {1.0, 0, 0.0};
    const auto [k, theta] = water_level(cond, rate);
    const double m = static_cast<double>(model.M);
    return {1.0 - explained_variance(model, k) / m + static_cast<double>(k) * theta / m, k, theta};
}

IdrfEval ce_eval(const SpectralModel& model, double rate) {
    require_rate(rate);
    const auto [k, theta] = water_level(model.observation(), rate);
    double weights = 0.0;
    for (std::size_t l = 0; l < k; ++l) weights += ce_weight(model.lambda(l), model.sigma2);
    const double m = static_cast<double>(model.M);
    return {1.0 - explained_variance(model, k) / m + theta * weights / m, k, theta};
}

double clamp_gap(double g) { return (g < 0.0 && g > -1e-12) ? 0.0 : g; }

}  // namespace

double idrf(const SpectralModel& model, double rate) { return idrf_eval(model, rate).d; }
double idrf(const ObservationModel& model, double rate) { return idrf(spectral_model(model), rate); }

double ce_drf(const SpectralModel& model, double rate) { return ce_eval(model, rate).d; }
double ce_drf(const ObservationModel& model, double rate) { return ce_drf(spectral_model(model), rate); }

EqualityRegion equality_region(const SpectralModel& model) {
    const std::size_t r = std::min(model.M, model.L);
    const double w1 = ce_weight(model.lambda(0), model.sigma2);
    const double tol = w1 > 0.0 ? kEqualityTolerance * w1 : kRankAbsTolerance;

    EqualityRegion out;
    out.r0 = 1;
    while (out.r0 < r && std::abs(ce_weight(model.lambda(out.r0), model.sigma2) - w1) <= tol) ++out.r0;

    const Spectrum cond = model.conditional();
    const double limit_ce = threshold_at(model.observation(), out.r0 + 1);
    const double limit_opt = cond.rank == 0 ? kInf : threshold_at(cond, out.r0 + 1);
    out.R_limit = std::min(limit_ce, limit_opt);
    out.unconditional = out.r0 == model.L && model.L == model.M;
    return out;
}

EqualityRegion equality_region(const ObservationModel& model) { return equality_region(spectral_model(model)); }

double gap(const SpectralModel& model, double rate) { return clamp_gap(ce_drf(model, rate) - idrf(model, rate)); }
double gap(const ObservationModel& model, double rate) { return gap(spectral_model(model), rate); }

double gap_upper_bound(const SpectralModel& model, double rate) {
    require_rate(rate);
    const double l = static_cast<double>(model.L);
    const double m = static_cast<double>(model.M);
    return (l / m) * (model.lambda(0) + model.sigma2) / (4.0 * model.sigma2) * std::exp2(-2.0 * rate / l);
}

double gap_lower_bound(const SpectralModel& model, double rate) {
    require_rate(rate);
    if (model.L < 2) return 0.0;
    const double r2_ce = rate_thresholds(model.observation())[1];
    if (!(rate > r2_ce)) return 0.0;
    const double s2 = model.sigma2;
    const double l1 = model.lambda(0);
    const double l2 = model.lambda(1);
    const double diff = std::sqrt(l1) / (l1 + s2) - std::sqrt(l2) / (l2 + s2);
    const double l = static_cast<double>(model.L);
    return (model.lambda(model.L - 1) + s2) / static_cast<double>(model.M) * diff * diff * std::exp2(-2.0 * rate / l);
}

double gap_2d(double lambda1, double lambda2, double sigma2, double rate) {
    require_condition_2d(lambda1, lambda2, sigma2);
    require_rate(rate);
    if (lambda1 == 0.0) return 0.0;

    const auto model = SpectralModel::from_gram({lambda1, lambda2}, sigma2, 2);
    const double r2_opt = rate_thresholds(model.conditional())[1];
    const double r2_ce = rate_thresholds(model.observation())[1];
    if (rate <= r2_opt) return 0.0;
    if (rate <= r2_ce) {
        const double a = std::sqrt(lambda1 / (lambda1 + sigma2)) * std::exp2(-rate);
        const double b = std::sqrt(lambda2 / (lambda2 + sigma2));
        return 0.5 * (a - b) * (a - b);
    }
    return gap(model, rate);
}

MaxGap max_gap_2d(double lambda1, double lambda2, double sigma2) {
    require_condition_2d(lambda1, lambda2, sigma2);
    const double r_star = 0.5 * std::log2((lambda1 + sigma2) / (lambda2 + sigma2));
    const double diff = std::sqrt(lambda1) / (lambda1 + sigma2) - std::sqrt(lambda2) / (lambda2 + sigma2);
    return {r_star, 0.5 * (lambda2 + sigma2) * diff * diff};
}

AmGm am_gm_pair(std::span<const double> values) {
    if (values.empty()) throw NonPositiveInput("AM-GM needs at least one value");
    double sum = 0.0;
    double log_sum = 0.0;
    double lo = values.front();
    double hi = values.front();
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw NonPositiveInput("AM-GM inputs must be positive and finite");
        sum += v;
        log_sum += std::log(v);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double n = static_cast<double>(values.size());
    AmGm out;
    out.am = sum / n;
    out.gm = std::exp(log_sum / n);
    out.reverse_bound = out.gm + (n - 1.0) / n * (hi - lo);
    const double root_spread = std::sqrt(hi) - std::sqrt(lo);
    out.lower_bound = out.gm + root_spread * root_spread / n;
    return out;
}

DistortionPoint evaluate(const SpectralModel& model, double rate) {
    const auto opt = idrf_eval(model, rate);
    const auto ce = ce_eval(model, rate);
    DistortionPoint p;
    p.R = rate;
    p.d_idrf = opt.d;
    p.d_ce = ce.d;
    p.gap = clamp_gap(ce.d - opt.d);
    p.gap_ub = gap_upper_bound(model, rate);
    p.gap_lb = gap_lower_bound(model, rate);
    p.k_idrf = opt.k;
    p.k_ce = ce.k;
    p.theta_idrf = opt.theta;
    p.theta_ce = ce.theta;
    return p;
}

std::vector<DistortionPoint> sweep(const SpectralModel& model, std::span<const double> rates) {
    if (rates.empty()) throw InvalidGrid("rate grid is empty");
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (!std::isfinite(rates[i]) || rates[i] < 0.0) throw InvalidGrid("rate grid has a negative or non-finite entry");
        if (i > 0 && !(rates[i] > rates[i - 1])) throw InvalidGrid("rate grid must be strictly increasing");
    }
    std::vector<DistortionPoint> out;
    out.reserve(rates.size());
    for (double r : rates) out.push_back(evaluate(model, r));
    return out;
}

}  // namespace cedrf
