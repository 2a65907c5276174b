#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "cedrf/app/commands.hpp"
#include "cedrf/app/model_file.hpp"
#include "cedrf/error.hpp"

using namespace cedrf;
using namespace cedrf::app;

TEST(ModelFile, ParsesMatrixAndNoise) {
    const auto f = parse_model(R"({"A": [[1, 2, 3], [4, 5, 6]], "sigma2": 0.25})");
    EXPECT_EQ(f.A.rows(), 2u);
    EXPECT_EQ(f.A.cols(), 3u);
    EXPECT_EQ(f.A(1, 2), 6.0);
    EXPECT_EQ(f.sigma2, 0.25);
    EXPECT_FALSE(f.sigma_x.has_value());
}

TEST(ModelFile, ReportsErrors) {
    EXPECT_THROW(parse_model("{\"A\": [[1]], "), ParseError);
    EXPECT_THROW(parse_model(R"({"sigma2": 1})"), ParseError);
    EXPECT_THROW(parse_model(R"({"A": [[1]]})"), ParseError);
    EXPECT_THROW(parse_model(R"({"A": [[1, "x"]], "sigma2": 1})"), ParseError);
    EXPECT_THROW(parse_model(R"({"A": [[1, 2], [3]], "sigma2": 1})"), InvalidModel);
    EXPECT_THROW(parse_model(R"({"A": [[1]], "sigma2": 0})"), InvalidModel);
    EXPECT_THROW(parse_model(R"({"A": [[1]], "sigma2": 1, "sigma_x": [[1, 2], [3, 4]]})"), InvalidModel);
    EXPECT_THROW(parse_model(R"({"A": [[1, 0]], "sigma2": 1, "sigma_x": [[1, 0], [0, -1]]})"), InvalidModel);
    EXPECT_THROW(load_model("/nonexistent/model.json"), FileNotFound);
}

TEST(ModelFile, ParseErrorNamesLocation) {
    try {
        parse_model("{\n  \"A\": [[1]],\n  oops\n}", "m.json");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("m.json"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(ModelFile, WhiteningMatchesScaledMatrix) {
    const auto f = parse_model(R"({"A": [[1, 0.5], [-0.3, 2], [0.7, 0.1]], "sigma2": 0.5,
                                   "sigma_x": [[4, 0], [0, 4]]})");
    const auto w = f.observation_model();
    const ObservationModel direct(f.A * 2.0, 0.5);
    for (double r : {0.5, 2.0, 5.0}) {
        EXPECT_NEAR(ce_drf(w, r), ce_drf(direct, r), 1e-12);
        EXPECT_NEAR(idrf(w, r), idrf(direct, r), 1e-12);
    }
}

TEST(Units, NatsRoundTrip) {
    EXPECT_DOUBLE_EQ(to_bits(std::numbers::ln2, RateUnit::Nats), 1.0);
    EXPECT_DOUBLE_EQ(from_bits(1.0, RateUnit::Nats), std::numbers::ln2);
    EXPECT_EQ(to_bits(1.5, RateUnit::Bits), 1.5);
}

TEST(Analyze, ReportContents) {
    const auto r = analyze_report(example_observation_model(), 1.0);
    EXPECT_EQ(r["unit"], "bits");
    EXPECT_NEAR(r["point"]["d_ce"].get<double>(), 0.64285714285714286, 1e-13);
    EXPECT_NEAR(r["point"]["d_idrf"].get<double>(), 0.63886094205236267, 1e-13);
    EXPECT_NEAR(r["thresholds"]["observation"][1].get<double>(), 1.9036774610288021, 1e-13);
    EXPECT_TRUE(r["thresholds"]["observation"][2].is_null());
    EXPECT_EQ(r["equality_region"]["r0"], 1);
    EXPECT_EQ(r["allocation"]["ce"]["k"], 1);
    EXPECT_THROW(analyze_report(example_observation_model(), -1.0), InvalidArgument);
}

TEST(Analyze, NatsReportUsesNats) {
    const auto bits = analyze_report(example_observation_model(), 1.0);
    const auto nats = analyze_report(example_observation_model(), std::numbers::ln2, RateUnit::Nats);
    EXPECT_NEAR(nats["point"]["d_ce"].get<double>(), bits["point"]["d_ce"].get<double>(), 1e-15);
    EXPECT_NEAR(nats["thresholds"]["observation"][1].get<double>(),
                bits["thresholds"]["observation"][1].get<double>() * std::numbers::ln2, 1e-13);
}

TEST(Grid, LinearGrid) {
    const auto g = linear_grid(0.0, 1.0, 2);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g[0], 0.0);
    EXPECT_EQ(g[1], 1.0);
    EXPECT_EQ(linear_grid(0.0, 4.5, 451)[10], 0.1);
    EXPECT_THROW(linear_grid(1.0, 1.0, 5), InvalidGrid);
    EXPECT_THROW(linear_grid(2.0, 1.0, 5), InvalidGrid);
    EXPECT_THROW(linear_grid(-1.0, 1.0, 5), InvalidGrid);
    EXPECT_THROW(linear_grid(0.0, 1.0, 1), InvalidGrid);
}

TEST(SweepCsv, RoundTripIsBitExact) {
    const auto grid = linear_grid(0.0, 6.0, 61);
    const auto rows = sweep_rows(example_model(), grid);
    std::stringstream ss;
    write_sweep_csv(ss, rows);
    const auto back = read_sweep_csv(ss);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].R, rows[i].R);
        EXPECT_EQ(back[i].d_idrf, rows[i].d_idrf);
        EXPECT_EQ(back[i].d_ce, rows[i].d_ce);
        EXPECT_EQ(back[i].gap, rows[i].gap);
        EXPECT_EQ(back[i].gap_ub, rows[i].gap_ub);
        EXPECT_EQ(back[i].gap_lb, rows[i].gap_lb);
        EXPECT_EQ(back[i].k_idrf, rows[i].k_idrf);
        EXPECT_EQ(back[i].k_ce, rows[i].k_ce);
        EXPECT_EQ(back[i].theta_idrf, rows[i].theta_idrf);
        EXPECT_EQ(back[i].theta_ce, rows[i].theta_ce);
    }
}

TEST(SweepCsv, RejectsMalformedInput) {
    std::stringstream bad_header("R,d\n");
    EXPECT_THROW(read_sweep_csv(bad_header), ParseError);
    std::stringstream short_row(std::string(kSweepCsvHeader) + "\n1,2,3\n");
    EXPECT_THROW(read_sweep_csv(short_row), ParseError);
    std::stringstream bad_number(std::string(kSweepCsvHeader) + "\n1,2,3,4,5,6,7,8,9,x\n");
    EXPECT_THROW(read_sweep_csv(bad_number), ParseError);
}

TEST(SweepRows, NatsGridReportsNats) {
    const std::vector<double> grid{0.0, std::numbers::ln2};
    const auto rows = sweep_rows(example_model(), grid, RateUnit::Nats);
    EXPECT_EQ(rows[1].R, std::numbers::ln2);
    EXPECT_NEAR(rows[1].d_ce, 0.64285714285714286, 1e-13);
}

TEST(SweepJson, HasRows) {
    std::stringstream ss;
    write_sweep_json(ss, sweep_rows(example_model(), linear_grid(0.0, 1.0, 3)));
    const auto j = nlohmann::json::parse(ss.str());
    EXPECT_EQ(j["rows"].size(), 3u);
}

TEST(Verify, ExampleModelPasses) {
    VerifyOptions opts;
    opts.mc_samples = 50'000;
    const auto report = verify_models({{"example", example_observation_model()}}, opts);
    EXPECT_TRUE(report.passed());
    EXPECT_GT(report.checks.size(), 5u);
}

TEST(Verify, NegativeControlIsCaught) {
    VerifyOptions opts;
    opts.monte_carlo = false;
    opts.closed_form_perturbation = 1e-6;
    const auto report = verify_models({{"example", example_observation_model()}}, opts);
    EXPECT_FALSE(report.passed());
    bool named = false;
    for (const auto& c : report.checks) {
        if (!c.passed) {
            EXPECT_EQ(c.name, "oracle-equivalence");
            named = true;
        }
    }
    EXPECT_TRUE(named);
    std::stringstream out;
    print_verify(out, report);
    EXPECT_NE(out.str().find("FAIL"), std::string::npos);
    EXPECT_NE(out.str().find("oracle-equivalence"), std::string::npos);
}

TEST(Verify, RandomModelsAreReproducible) {
    const auto a = verify_random_models(5, 3);
    const auto b = verify_random_models(5, 3);
    ASSERT_EQ(a.size(), 5u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].first, b[i].first);
        EXPECT_EQ(a[i].second.A(), b[i].second.A());
    }
}

TEST(Example, GoldenValues) {
    const auto rep = run_example();
    EXPECT_NEAR(rep.r2_conditional, 0.75728658641487912, 1e-13);
    EXPECT_NEAR(rep.r2_observation, 1.9036774610288021, 1e-13);
    EXPECT_NEAR(rep.closed_form.G_star, 0.050095621624634998, 1e-13);
    EXPECT_NEAR(rep.numeric_max, rep.closed_form.G_star, 1e-10);
    EXPECT_NEAR(rep.numeric_argmax, rep.closed_form.R_star, 1e-6);
    EXPECT_EQ(rep.gap_at_half, 0.0);
    EXPECT_NEAR(rep.gap_at_three, 0.023430081587105992, 1e-13);
    EXPECT_EQ(rep.curve.size(), 451u);
    std::stringstream drf, gap;
    write_example_drf_csv(drf, rep);
    write_example_gap_csv(gap, rep);
    std::string header;
    std::getline(drf, header);
    EXPECT_EQ(header, "R,d_idrf,d_ce,mmse");
    std::getline(gap, header);
    EXPECT_EQ(header, "R,gap,gap_ub,gap_lb");
}
