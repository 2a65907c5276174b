#include "cedrf/app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "cedrf/error.hpp"
#include "cedrf/random_models.hpp"
#include "cedrf/waterfill.hpp"

namespace cedrf::app {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json thresholds_json(const Spectrum& spec, RateUnit unit) {
    json out = json::array();
    if (spec.rank == 0) return out;
    for (double r : rate_thresholds(spec)) out.push_back(finite_or_null(from_bits(r, unit)));
    return out;
}

json allocation_json(const Spectrum& spec, double rate_bits, RateUnit unit) {
    if (spec.rank == 0) return json{{"k", 0}, {"theta", nullptr}, {"rates", json::array()}};
    const auto alloc = rate_allocation(spec, rate_bits);
    json rates = json::array();
    for (double r : alloc.rates) rates.push_back(from_bits(r, unit));
    return json{{"k", alloc.k}, {"theta", alloc.theta}, {"rates", rates}, {"distortions", alloc.distortions}};
}

std::string unit_name(RateUnit unit) { return unit == RateUnit::Bits ? "bits" : "nats"; }

std::string fmt(double x, int precision = 6) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    return buf;
}

std::string fmt_json(const json& v, int precision = 6) {
    if (v.is_null()) return "inf";
    if (v.is_number_integer() || v.is_number_unsigned()) return std::to_string(v.get<long long>());
    if (v.is_number()) return fmt(v.get<double>(), precision);
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_array()) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_json(v[i], precision);
        return s + "]";
    }
    return v.dump();
}

std::vector<double> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != cell.size()) {
            throw ParseError("sweep CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace

double to_bits(double rate, RateUnit unit) noexcept {
    return unit == RateUnit::Bits ? rate : rate / std::numbers::ln2;
}

double from_bits(double rate_bits, RateUnit unit) noexcept {
    return unit == RateUnit::Bits ? rate_bits : rate_bits * std::numbers::ln2;
}

// ---------------------------------------------------------------- analyze

json analyze_report(const ObservationModel& model, double rate, RateUnit unit) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw InvalidArgument("rate must be finite and non-negative");
    const double rate_bits = to_bits(rate, unit);
    const SpectralModel sm = spectral_model(model);
    const Spectrum obs = sm.observation();
    const Spectrum cond = sm.conditional();
    const EqualityRegion eq = equality_region(sm);
    const DistortionPoint p = evaluate(sm, rate_bits);

    json report;
    report["unit"] = unit_name(unit);
    report["rate"] = rate;
    report["model"] = {{"M", model.M()},
                       {"L", model.L()},
                       {"r", model.r()},
                       {"sigma2", model.sigma2()},
                       {"full_rank", model.full_rank()}};
    report["spectra"] = {{"gram", sm.gram.values}, {"observation", obs.values}, {"conditional", cond.values}};
    report["mmse"] = sm.mmse();
    report["thresholds"] = {{"conditional", thresholds_json(cond, unit)},
                            {"observation", thresholds_json(obs, unit)}};
    report["equality_region"] = {{"r0", eq.r0},
                                 {"R_limit", finite_or_null(from_bits(eq.R_limit, unit))},
                                 {"unconditional", eq.unconditional}};
    report["point"] = {{"R", rate},         {"d_idrf", p.d_idrf},         {"d_ce", p.d_ce},
                       {"gap", p.gap},      {"gap_ub", p.gap_ub},         {"gap_lb", p.gap_lb},
                       {"k_idrf", p.k_idrf}, {"k_ce", p.k_ce},             {"theta_idrf", p.theta_idrf},
                       {"theta_ce", p.theta_ce}};
    report["allocation"] = {{"idrf", allocation_json(cond, rate_bits, unit)},
                            {"ce", allocation_json(obs, rate_bits, unit)}};
    return report;
}

void print_analyze(std::ostream& out, const json& r) {
    const std::string u = r["unit"].get<std::string>();
    const auto& m = r["model"];
    out << "model: M=" << fmt_json(m["M"]) << " L=" << fmt_json(m["L"]) << " r=" << fmt_json(m["r"])
        << " sigma2=" << fmt_json(m["sigma2"]) << " full_rank=" << fmt_json(m["full_rank"]) << "\n";
    out << "spectra:\n"
        << "  gram (A A^T):        " << fmt_json(r["spectra"]["gram"]) << "\n"
        << "  observation (S_Y):   " << fmt_json(r["spectra"]["observation"]) << "\n"
        << "  conditional (S_X|Y): " << fmt_json(r["spectra"]["conditional"]) << "\n";
    out << "mmse floor: " << fmt_json(r["mmse"]) << "\n";
    out << "thresholds R_k [" << u << "]:\n"
        << "  conditional: " << fmt_json(r["thresholds"]["conditional"]) << "\n"
        << "  observation: " << fmt_json(r["thresholds"]["observation"]) << "\n";
    const auto& eq = r["equality_region"];
    out << "equality region: r0=" << fmt_json(eq["r0"]) << " R_limit=" << fmt_json(eq["R_limit"]) << " " << u
        << " unconditional=" << fmt_json(eq["unconditional"]) << "\n";
    const auto& p = r["point"];
    out << "at R=" << fmt_json(p["R"]) << " " << u << ":\n"
        << "  D_X|Y = " << fmt_json(p["d_idrf"], 10) << "  (k=" << fmt_json(p["k_idrf"])
        << ", theta=" << fmt_json(p["theta_idrf"]) << ")\n"
        << "  D_CE  = " << fmt_json(p["d_ce"], 10) << "  (k=" << fmt_json(p["k_ce"])
        << ", theta=" << fmt_json(p["theta_ce"]) << ")\n"
        << "  gap   = " << fmt_json(p["gap"], 10) << "  bounds [" << fmt_json(p["gap_lb"]) << ", "
        << fmt_json(p["gap_ub"]) << "]\n";
    out << "rate allocation [" << u << "]:\n"
        << "  optimal (S_X|Y): " << fmt_json(r["allocation"]["idrf"]["rates"]) << "\n"
        << "  CE (S_Y):        " << fmt_json(r["allocation"]["ce"]["rates"]) << "\n";
}

// ---------------------------------------------------------------- sweep

std::vector<double> linear_grid(double lo, double hi, std::size_t steps) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || lo < 0.0 || !(lo < hi)) {
        throw InvalidGrid("grid needs 0 <= min < max");
    }
    if (steps < 2) throw InvalidGrid("grid needs at least 2 steps");
    std::vector<double> grid(steps);
    const double span = hi - lo;
    for (std::size_t i = 0; i < steps; ++i) {
        grid[i] = lo + span * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    grid.back() = hi;
    return grid;
}

std::vector<DistortionPoint> sweep_rows(const SpectralModel& model, std::span<const double> grid, RateUnit unit) {
    std::vector<double> bits(grid.size());
    std::transform(grid.begin(), grid.end(), bits.begin(), [&](double r) { return to_bits(r, unit); });
    auto rows = sweep(model, bits);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].R = grid[i];
    return rows;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<DistortionPoint>& rows) {
    out << kSweepCsvHeader << "\n";
    for (const auto& p : rows) {
        out << format_double(p.R) << ',' << format_double(p.d_idrf) << ',' << format_double(p.d_ce) << ','
            << format_double(p.gap) << ',' << format_double(p.gap_ub) << ',' << format_double(p.gap_lb) << ','
            << p.k_idrf << ',' << p.k_ce << ',' << format_double(p.theta_idrf) << ','
            << format_double(p.theta_ce) << "\n";
    }
}

void write_sweep_json(std::ostream& out, const std::vector<DistortionPoint>& rows) {
    json arr = json::array();
    for (const auto& p : rows) {
        arr.push_back({{"R", p.R},
                       {"d_idrf", p.d_idrf},
                       {"d_ce", p.d_ce},
                       {"gap", p.gap},
                       {"gap_ub", p.gap_ub},
                       {"gap_lb", p.gap_lb},
                       {"k_idrf", p.k_idrf},
                       {"k_ce", p.k_ce},
                       {"theta_idrf", p.theta_idrf},
                       {"theta_ce", p.theta_ce}});
    }
    out << json{{"rows", arr}}.dump(2) << "\n";
}

std::vector<DistortionPoint> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kSweepCsvHeader) throw ParseError("sweep CSV: unexpected header");
    std::vector<DistortionPoint> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto v = split_csv_line(line, line_no);
        if (v.size() != 10) {
            throw ParseError("sweep CSV line " + std::to_string(line_no) + ": expected 10 fields");
        }
        DistortionPoint p;
        p.R = v[0];
        p.d_idrf = v[1];
        p.d_ce = v[2];
        p.gap = v[3];
        p.gap_ub = v[4];
        p.gap_lb = v[5];
        p.k_idrf = static_cast<std::size_t>(v[6]);
        p.k_ce = static_cast<std::size_t>(v[7]);
        p.theta_idrf = v[8];
        p.theta_ce = v[9];
        rows.push_back(p);
    }
    return rows;
}

// ---------------------------------------------------------------- verify

std::size_t VerifyReport::failures() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

namespace {

// Rates 0..12 in quarter bits plus points straddling every finite threshold.
std::vector<double> verification_grid(const SpectralModel& sm) {
    std::vector<double> grid;
    for (int i = 0; i <= 48; ++i) grid.push_back(0.25 * i);
    for (const Spectrum& s : {sm.observation(), sm.conditional()}) {
        if (s.rank == 0) continue;
        for (double t : rate_thresholds(s)) {
            if (!std::isfinite(t) || t <= 0.0 || t > 12.0) continue;
            grid.push_back(t);
            grid.push_back(t - 1e-6);
            grid.push_back(t + 1e-6);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

CheckResult make_check(std::string name, const std::string& model, double tolerance, double observed,
                       std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.model = model;
    c.tolerance = tolerance;
    c.observed = observed;
    c.passed = observed <= tolerance;
    c.detail = std::move(detail);
    return c;
}

void verify_one(const std::string& name, const ObservationModel& model, const VerifyOptions& options,
                std::uint64_t seed, VerifyReport& report) {
    const SpectralModel sm = spectral_model(model);
    const auto grid = verification_grid(sm);
    const auto points = sweep(sm, grid);
    const double mmse = sm.mmse();

    double oracle_err = 0.0;
    double order_violation = -kInf;
    double mono_violation = -kInf;
    double ub_violation = -kInf;
    double lb_violation = -kInf;
    double worst_rate_lb = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        const double closed = p.d_ce + options.closed_form_perturbation;
        oracle_err = std::max(oracle_err, std::abs(ce_matrix_form(model, p.R) - closed));
        order_violation = std::max({order_violation, mmse - p.d_idrf, p.d_idrf - p.d_ce, p.d_ce - 1.0});
        if (i > 0) {
            mono_violation = std::max({mono_violation, p.d_idrf - points[i - 1].d_idrf, p.d_ce - points[i - 1].d_ce});
        }
        ub_violation = std::max(ub_violation, p.gap - p.gap_ub);
        if (p.gap_lb - p.gap > lb_violation) {
            lb_violation = p.gap_lb - p.gap;
            worst_rate_lb = p.R;
        }
    }
    report.checks.push_back(make_check("oracle-equivalence", name, 1e-9, oracle_err));
    report.checks.push_back(make_check("ordering", name, 1e-10, order_violation));
    report.checks.push_back(make_check("monotonicity", name, 1e-12, mono_violation));
    report.checks.push_back(make_check("gap-upper-bound", name, 1e-10, ub_violation));
    report.checks.push_back(make_check("gap-lower-bound", name, 1e-10, lb_violation,
                                       "worst at R=" + fmt(worst_rate_lb)));

    const EqualityRegion eq = equality_region(sm);
    const double cap = std::isfinite(eq.R_limit) ? eq.R_limit : 12.0;
    double eq_err = 0.0;
    for (int j = 1; j <= 20; ++j) {
        const double r = cap * j / 20.0;
        eq_err = std::max(eq_err, std::abs(ce_drf(sm, r) - idrf(sm, r)));
    }
    report.checks.push_back(
        make_check("equality-region", name, 1e-10, eq_err, "R_limit=" + fmt(eq.R_limit) + " r0=" + std::to_string(eq.r0)));

    if (!options.monte_carlo) return;
    std::vector<double> mc_rates{0.5, 1.0};
    if (sm.L >= 2) mc_rates.push_back(rate_thresholds(sm.observation())[1]);
    mc_rates.push_back(3.0);
    std::uint64_t s = seed;
    for (double r : mc_rates) {
        const auto ce = mc_ce(model, r, options.mc_samples, s++, options.mc);
        const double ce_ref = ce_drf(sm, r);
        report.checks.push_back(make_check("monte-carlo-ce", name, std::max(4.0 * ce.std_error, 1e-3),
                                           std::abs(ce.mean - ce_ref), "R=" + fmt(r)));
        const auto opt = mc_idrf(model, r, options.mc_samples, s++, options.mc);
        const double opt_ref = idrf(sm, r);
        report.checks.push_back(make_check("monte-carlo-idrf", name, std::max(4.0 * opt.std_error, 1e-3),
                                           std::abs(opt.mean - opt_ref), "R=" + fmt(r)));
    }
    const auto floor = mc_mmse(model, options.mc_samples, s++, options.mc);
    report.checks.push_back(make_check("monte-carlo-mmse", name, std::max(4.0 * floor.std_error, 1e-3),
                                       std::abs(floor.mean - mmse)));
}

}  // namespace

VerifyReport verify_models(const std::vector<NamedModel>& models, const VerifyOptions& options) {
    VerifyReport report;
    for (std::size_t i = 0; i < models.size(); ++i) {
        verify_one(models[i].first, models[i].second, options, options.seed + 1000 * i, report);
    }
    return report;
}

std::vector<NamedModel> verify_random_models(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<NamedModel> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto model = random_model(rng);
        std::string name = "random#" + std::to_string(i) + " (L=" + std::to_string(model.L()) +
                           ",M=" + std::to_string(model.M()) + ",s2=" + fmt(model.sigma2()) + ")";
        out.emplace_back(std::move(name), std::move(model));
    }
    return out;
}

void print_verify(std::ostream& out, const VerifyReport& report) {
    // Aggregate by check name, then list every failing instance.
    std::vector<std::string> names;
    for (const auto& c : report.checks) {
        if (std::find(names.begin(), names.end(), c.name) == names.end()) names.push_back(c.name);
    }
    for (const auto& n : names) {
        std::size_t total = 0;
        std::size_t failed = 0;
        const CheckResult* worst = nullptr;
        for (const auto& c : report.checks) {
            if (c.name != n) continue;
            ++total;
            failed += c.passed ? 0 : 1;
            if (worst == nullptr || c.observed - c.tolerance > worst->observed - worst->tolerance) worst = &c;
        }
        out << (failed == 0 ? "PASS " : "FAIL ") << n << ": " << (total - failed) << "/" << total
            << " passed, worst observed " << fmt(worst->observed, 4) << " (tolerance " << fmt(worst->tolerance, 4)
            << ")\n";
    }
    for (const auto& c : report.checks) {
        if (c.passed) continue;
        out << "  FAIL " << c.name << " [" << c.model << "] observed " << fmt(c.observed, 6) << " > tolerance "
            << fmt(c.tolerance, 4);
        if (!c.detail.empty()) out << " (" << c.detail << ")";
        out << "\n";
    }
    out << (report.passed() ? "all checks passed" : std::to_string(report.failures()) + " check(s) failed") << "\n";
}

// ---------------------------------------------------------------- example

SpectralModel example_model() { return SpectralModel::from_gram({20.0, 0.5}, 1.0, 2); }

ObservationModel example_observation_model() {
    return {Matrix{{std::sqrt(20.0), 0.0}, {0.0, std::sqrt(0.5)}}, 1.0};
}

ExampleReport run_example() {
    const SpectralModel sm = example_model();
    ExampleReport rep;
    rep.r2_conditional = rate_thresholds(sm.conditional())[1];
    rep.r2_observation = rate_thresholds(sm.observation())[1];
    rep.closed_form = max_gap_2d(sm.lambda(0), sm.lambda(1), sm.sigma2);

    // Dense grid, then golden-section refinement around the best grid point.
    constexpr double kMaxRate = 4.5;
    constexpr int kDense = 45000;
    double best_r = 0.0;
    double best_g = -1.0;
    for (int i = 0; i <= kDense; ++i) {
        const double r = kMaxRate * i / kDense;
        const double g = gap(sm, r);
        if (g > best_g) {
            best_g = g;
            best_r = r;
        }
    }
    const double h = kMaxRate / kDense;
    double lo = std::max(0.0, best_r - h);
    double hi = std::min(kMaxRate, best_r + h);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double ga = gap(sm, a);
    double gb = gap(sm, b);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        if (ga < gb) {
            lo = a;
            a = b;
            ga = gb;
            b = lo + inv_phi * (hi - lo);
            gb = gap(sm, b);
        } else {
            hi = b;
            b = a;
            gb = ga;
            a = hi - inv_phi * (hi - lo);
            ga = gap(sm, a);
        }
    }
    rep.numeric_argmax = 0.5 * (lo + hi);
    rep.numeric_max = std::max(best_g, gap(sm, rep.numeric_argmax));

    rep.gap_at_half = gap(sm, 0.5);
    rep.gap_at_three = gap(sm, 3.0);
    rep.curve = sweep(sm, linear_grid(0.0, kMaxRate, 451));
    return rep;
}

void print_example(std::ostream& out, const ExampleReport& rep) {
    out << "two-source, two-observation example: lambda = (20, 0.5), sigma2 = 1, M = L = 2\n"
        << "  R_2(Sigma_X|Y) = " << fmt(rep.r2_conditional, 8) << " bits\n"
        << "  R_2(Sigma_Y)   = " << fmt(rep.r2_observation, 8) << " bits\n"
        << "  max gap (closed form) = " << fmt(rep.closed_form.G_star, 8) << " at R = "
        << fmt(rep.closed_form.R_star, 8) << " bits\n"
        << "  max gap (numerical)   = " << fmt(rep.numeric_max, 8) << " at R = " << fmt(rep.numeric_argmax, 8)
        << " bits\n"
        << "  gap at R = 0.5 = " << fmt(rep.gap_at_half, 8) << "\n"
        << "  gap at R = 3   = " << fmt(rep.gap_at_three, 8) << "\n";
}

void write_example_drf_csv(std::ostream& out, const ExampleReport& rep) {
    const double mmse = example_model().mmse();
    out << "R,d_idrf,d_ce,mmse\n";
    for (const auto& p : rep.curve) {
        out << format_double(p.R) << ',' << format_double(p.d_idrf) << ',' << format_double(p.d_ce) << ','
            << format_double(mmse) << "\n";
    }
}

void write_example_gap_csv(std::ostream& out, const ExampleReport& rep) {
    out << "R,gap,gap_ub,gap_lb\n";
    for (const auto& p : rep.curve) {
        out << format_double(p.R) << ',' << format_double(p.gap) << ',' << format_double(p.gap_ub) << ','
            << format_double(p.gap_lb) << "\n";
    }
}

}  // namespace cedrf::app
