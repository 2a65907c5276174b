// cedrf: distortion-rate analysis for compress-and-estimate vs. optimal
// remote coding of a Gaussian vector source.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cedrf/app/commands.hpp"
#include "cedrf/app/model_file.hpp"
#include "cedrf/error.hpp"

namespace {

using namespace cedrf;
using namespace cedrf::app;

constexpr int kExitFailedChecks = 1;
constexpr int kExitError = 2;

const char* error_kind(const Error& e) {
    if (dynamic_cast<const FileNotFound*>(&e)) return "FileNotFound";
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    if (dynamic_cast<const InvalidModel*>(&e)) return "InvalidModel";
    if (dynamic_cast<const InvalidGrid*>(&e)) return "InvalidGrid";
    if (dynamic_cast<const IoError*>(&e)) return "IoError";
    if (dynamic_cast<const InvalidSampleCount*>(&e)) return "InvalidSampleCount";
    return "Error";
}

void write_file(const std::filesystem::path& path, const auto& writer) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    writer(out);
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distortion-rate functions of compress-and-estimate and optimal remote Gaussian source coding"};
    app.require_subcommand(1);
    bool nats = false;
    app.add_flag("--nats", nats, "Read and report rates in nats instead of bits");

    auto* analyze = app.add_subcommand("analyze", "Spectra, thresholds, equality region and distortions at one rate");
    std::string analyze_model;
    double analyze_rate = 0.0;
    bool analyze_json = false;
    analyze->add_option("model", analyze_model, "Model JSON file")->required();
    analyze->add_option("--rate,-r", analyze_rate, "Rate")->required();
    analyze->add_flag("--json", analyze_json, "Emit the report as JSON");

    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate both distortion-rate functions on a linear rate grid");
    std::string sweep_model;
    double sweep_min = 0.0;
    double sweep_max = 4.5;
    std::size_t sweep_steps = 451;
    std::string sweep_out;
    std::string sweep_format = "csv";
    sweep_cmd->add_option("model", sweep_model, "Model JSON file")->required();
    sweep_cmd->add_option("--min", sweep_min, "Smallest rate")->capture_default_str();
    sweep_cmd->add_option("--max", sweep_max, "Largest rate")->capture_default_str();
    sweep_cmd->add_option("--steps", sweep_steps, "Number of grid points (>= 2)")->capture_default_str();
    sweep_cmd->add_option("--out,-o", sweep_out, "Output file (stdout when omitted)");
    sweep_cmd->add_option("--format", sweep_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    auto* verify_cmd = app.add_subcommand("verify", "Check closed forms against the matrix form and Monte Carlo");
    std::string verify_model;
    std::size_t verify_random = 0;
    VerifyOptions verify_opts;
    unsigned verify_threads = 0;
    bool verify_no_mc = false;
    verify_cmd->add_option("model", verify_model, "Model JSON file");
    verify_cmd->add_option("--random", verify_random, "Verify N random models instead of a file");
    verify_cmd->add_option("--samples", verify_opts.mc_samples, "Monte Carlo samples per check")
        ->capture_default_str();
    verify_cmd->add_option("--seed", verify_opts.seed, "Seed for random models and Monte Carlo")
        ->capture_default_str();
    verify_cmd->add_option("--threads", verify_threads, "Monte Carlo worker threads (0 = all cores)");
    verify_cmd->add_flag("--no-monte-carlo", verify_no_mc, "Skip the Monte Carlo checks");

    auto* example_cmd = app.add_subcommand("example", "Reproduce the lambda = (20, 0.5), sigma2 = 1 example");
    std::string example_out;
    example_cmd->add_option("--out,-o", example_out, "Directory for drf_curves.csv and gap_curve.csv");

    CLI11_PARSE(app, argc, argv);
    const RateUnit unit = nats ? RateUnit::Nats : RateUnit::Bits;

    try {
        if (*analyze) {
            const auto model = load_model(analyze_model).observation_model();
            const auto report = analyze_report(model, analyze_rate, unit);
            if (analyze_json) std::cout << report.dump(2) << "\n";
            else print_analyze(std::cout, report);
            return 0;
        }

        if (*sweep_cmd) {
            const auto model = load_model(sweep_model).observation_model();
            const auto grid = linear_grid(sweep_min, sweep_max, sweep_steps);
            const auto rows = sweep_rows(spectral_model(model), grid, unit);
            auto emit = [&](std::ostream& out) {
                if (sweep_format == "json") write_sweep_json(out, rows);
                else write_sweep_csv(out, rows);
            };
            if (sweep_out.empty()) emit(std::cout);
            else write_file(sweep_out, emit);
            return 0;
        }

        if (*verify_cmd) {
            if (verify_model.empty() == (verify_random == 0)) {
                std::cerr << "error: verify needs exactly one of <model.json> or --random N\n";
                return kExitError;
            }
            verify_opts.monte_carlo = !verify_no_mc;
            verify_opts.mc.threads = verify_threads;
            std::vector<NamedModel> models;
            if (verify_random > 0) {
                models = verify_random_models(verify_random, verify_opts.seed);
            } else {
                models.emplace_back(verify_model, load_model(verify_model).observation_model());
            }
            const auto report = verify_models(models, verify_opts);
            print_verify(std::cout, report);
            return report.passed() ? 0 : kExitFailedChecks;
        }

        if (*example_cmd) {
            const auto rep = run_example();
            print_example(std::cout, rep);
            if (example_out.empty()) {
                std::cout << "\n# drf_curves.csv\n";
                write_example_drf_csv(std::cout, rep);
                std::cout << "\n# gap_curve.csv\n";
                write_example_gap_csv(std::cout, rep);
            } else {
                const std::filesystem::path dir(example_out);
                std::error_code ec;
                std::filesystem::create_directories(dir, ec);
                if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
                write_file(dir / "drf_curves.csv", [&](std::ostream& o) { write_example_drf_csv(o, rep); });
                write_file(dir / "gap_curve.csv", [&](std::ostream& o) { write_example_gap_csv(o, rep); });
                std::cout << "wrote " << (dir / "drf_curves.csv").string() << " and " << (dir / "gap_curve.csv").string()
                          << "\n";
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << error_kind(e) << ": " << e.what() << "\n";
        return kExitError;
    }
    return 0;
}
