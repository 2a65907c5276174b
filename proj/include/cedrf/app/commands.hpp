#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cedrf/drf.hpp"
#include "cedrf/oracle.hpp"

namespace cedrf::app {

enum class RateUnit { Bits, Nats };

double to_bits(double rate, RateUnit unit) noexcept;
double from_bits(double rate_bits, RateUnit unit) noexcept;

// ---------------------------------------------------------------- analyze

/// Spectra, thresholds, equality region, the DistortionPoint at `rate` and
/// both rate allocations. `rate` is in `unit`.
nlohmann::json analyze_report(const ObservationModel& model, double rate, RateUnit unit = RateUnit::Bits);
void print_analyze(std::ostream& out, const nlohmann::json& report);

// ---------------------------------------------------------------- sweep

inline constexpr std::string_view kSweepCsvHeader = "R,d_idrf,d_ce,gap,gap_ub,gap_lb,k_idrf,k_ce,theta_idrf,theta_ce";

/// `steps` evenly spaced points from lo to hi inclusive. Throws InvalidGrid
/// unless 0 <= lo < hi and steps >= 2.
std::vector<double> linear_grid(double lo, double hi, std::size_t steps);

/// Rows for a grid given in `unit`; each row's R is reported in `unit`.
std::vector<DistortionPoint> sweep_rows(const SpectralModel& model, std::span<const double> grid,
                                        RateUnit unit = RateUnit::Bits);

/// 17 significant digits so values round-trip exactly.
std::string format_double(double x);
void write_sweep_csv(std::ostream& out, const std::vector<DistortionPoint>& rows);
void write_sweep_json(std::ostream& out, const std::vector<DistortionPoint>& rows);
/// Throws ParseError on a bad header or malformed row.
std::vector<DistortionPoint> read_sweep_csv(std::istream& in);

// ---------------------------------------------------------------- verify

struct CheckResult {
    std::string name;
    std::string model;
    double tolerance = 0.0;
    double observed = 0.0;  ///< error or worst violation; passes iff observed <= tolerance
    bool passed = true;
    std::string detail;
};

struct VerifyOptions {
    std::size_t mc_samples = 200'000;
    std::uint64_t seed = 1;
    bool monte_carlo = true;
    McOptions mc{};
    /// Added to the closed-form D_CE before comparing with the matrix form.
    /// Test-harness negative control only.
    double closed_form_perturbation = 0.0;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    [[nodiscard]] std::size_t failures() const;
    [[nodiscard]] bool passed() const { return failures() == 0; }
};

using NamedModel = std::pair<std::string, ObservationModel>;

VerifyReport verify_models(const std::vector<NamedModel>& models, const VerifyOptions& options);

/// `count` models from the default random distribution, seeded by `seed`.
std::vector<NamedModel> verify_random_models(std::size_t count, std::uint64_t seed);

void print_verify(std::ostream& out, const VerifyReport& report);

// ---------------------------------------------------------------- example

/// lambda = (20, 0.5), sigma2 = 1, M = L = 2.
SpectralModel example_model();
ObservationModel example_observation_model();

struct ExampleReport {
    double r2_conditional = 0.0;
    double r2_observation = 0.0;
    MaxGap closed_form{};
    double numeric_argmax = 0.0;  ///< grid search plus golden-section refinement
    double numeric_max = 0.0;
    double gap_at_half = 0.0;
    double gap_at_three = 0.0;
    std::vector<DistortionPoint> curve;  ///< [0, 4.5] bits, 451 points
};

ExampleReport run_example();
void print_example(std::ostream& out, const ExampleReport& report);
/// R,d_idrf,d_ce,mmse
void write_example_drf_csv(std::ostream& out, const ExampleReport& report);
/// R,gap,gap_ub,gap_lb
void write_example_gap_csv(std::ostream& out, const ExampleReport& report);

}  // namespace cedrf::app
