#include <doctest.h>

#include <sstream>

#include "catbell/runs.hpp"

using namespace catbell;

namespace {

std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') rows.push_back(line);
    return rows;
}

std::vector<std::string> cells(const std::string& row) {
    std::vector<std::string> out;
    std::istringstream in(row);
    std::string c;
    while (std::getline(in, c, ',')) out.push_back(c);
    return out;
}

bool has_footer(const RunRecord& rec, const std::string& key) {
    for (const auto& [k, v] : rec.footer)
        if (k == key) return true;
    return false;
}

} // namespace

TEST_CASE("ranges and parsing") {
    const Range main{0.0, 3.0, 0.01}, point{1.1, 1.1, 1.0}, grid{0.0, 2.0, 0.05};
    CHECK(main.count() == 301);
    CHECK(point.count() == 1);
    CHECK(grid.count() == 41);
    CHECK(main.at(300) == doctest::Approx(3.0));
    const Range neg{0.0, 1.0, -0.1}, backwards{2.0, 1.0, 0.1}, flat{0.0, 1.0, 0.0};
    CHECK_THROWS_AS(neg.count(), ConfigError);
    CHECK_THROWS_AS(backwards.count(), ConfigError);
    CHECK_THROWS_AS(flat.count(), ConfigError);

    const Range r = parse_range("0:3:0.01");
    CHECK(r.start == 0.0);
    CHECK(r.stop == 3.0);
    CHECK(r.step == 0.01);
    const Range single = parse_range("1.1");
    CHECK(single.start == 1.1);
    CHECK(single.count() == 1);
    CHECK_THROWS_AS(parse_range("1:2"), ConfigError);
    CHECK_THROWS_AS(parse_range("a:b:c"), ConfigError);
    CHECK_THROWS_AS(parse_range("1:0:0.5"), ConfigError);
    CHECK_THROWS_AS(parse_range(""), ConfigError);
}

TEST_CASE("seventeen-digit formatting round-trips") {
    CHECK(format_g17(0.1) == "0.10000000000000001");
    CHECK(format_g17(2.0) == "2");
    CHECK(format_g17(-1.5) == "-1.5");
    for (double v : {0.1, 1.0 / 3.0, 2.799863, 1e-17, -123.456e7}) {
        CHECK(std::stod(format_g17(v)) == v);
    }
    CHECK(format_g17(std::nan("")) == "nan");
}

TEST_CASE("crossing interpolation") {
    CHECK(interpolate_crossing(0.0, -1.0, 1.0, 1.0, 0.0) == doctest::Approx(0.5));
    CHECK(interpolate_crossing(2.0, 1.9, 2.1, 2.1, 2.0) == doctest::Approx(2.05));
}

TEST_CASE("config validation") {
    SweepConfig cfg;
    cfg.mode = "nonsense";
    CHECK_THROWS_AS(run_mode(cfg), ConfigError);
    cfg.mode = "correlations";
    cfg.restarts = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.restarts = 1;
    cfg.gate_points = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.gate_points = 2;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("correlations run: shape, zero-amplitude row, reproducibility") {
    SweepConfig cfg;
    cfg.mode = "correlations";
    cfg.alpha = Range{0.0, 0.2, 0.1};
    const RunRecord rec = run_correlations(cfg);
    const auto rows = data_rows(rec.csv);
    REQUIRE(rows.size() == 3);
    const auto c0 = cells(rows[0]);
    REQUIRE(c0.size() == 12);
    CHECK(c0[0] == "0");
    for (int k = 1; k <= 8; ++k) // all correlations are 1 at alpha = 0
        CHECK(std::stod(c0[k]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c0[9] == "0"); // concurrence
    CHECK(rec.csv.rfind("# catbell: 1.0.0\n", 0) == 0);
    CHECK(rec.csv.find("# columns: alpha,") != std::string::npos);
    CHECK(rec.csv.find("\r") == std::string::npos);
    CHECK(rec.csv.find("jobs") == std::string::npos); // machine-dependent, never echoed

    SweepConfig par = cfg;
    par.jobs = 3;
    CHECK(run_correlations(par).csv == rec.csv); // byte-identical regardless of workers
    CHECK(run_correlations(cfg).csv == rec.csv);
    CHECK(rec.plot_series.size() == 5);
}

TEST_CASE("bell sweep run: footer thresholds and determinism") {
    SweepConfig cfg;
    cfg.mode = "bell-sweep";
    cfg.alpha = Range{0.0, 0.3, 0.15};
    cfg.restarts = 2;
    cfg.seed = 99;
    const RunRecord rec = run_bell_sweep(cfg);
    const auto rows = data_rows(rec.csv);
    REQUIRE(rows.size() == 3);
    CHECK(cells(rows[0]).size() == 6);
    CHECK(has_footer(rec, "srp_min_alpha"));
    CHECK(has_footer(rec, "srp_crosses_two_alpha"));
    CHECK(has_footer(rec, "srp_overtakes_sbw_alpha"));

    SweepConfig par = cfg;
    par.jobs = 2;
    CHECK(run_bell_sweep(par).csv == rec.csv);
}

TEST_CASE("bell grid run") {
    SweepConfig cfg;
    cfg.mode = "bell-grid";
    cfg.alpha1 = Range{0.0, 0.2, 0.2};
    cfg.alpha2 = Range{0.0, 0.3, 0.1};
    const RunRecord rec = run_bell_sweep(cfg);
    const auto rows = data_rows(rec.csv);
    REQUIRE(rows.size() == 8); // 2 x 4, row-major in alpha1
    CHECK(cells(rows[0])[0] == "0");
    CHECK(cells(rows[7])[0] == "0.20000000000000001");
    CHECK(cells(rows[7])[1] == "0.30000000000000004");
    for (const auto& r : rows) CHECK(std::stod(cells(r)[2]) <= 2.0 * M_SQRT2 + 1e-9);
}

TEST_CASE("bw optimize run re-checks the operator path") {
    SweepConfig cfg;
    cfg.mode = "bw-optimize";
    cfg.alpha = Range{0.5, 0.5, 1.0};
    cfg.restarts = 4;
    const RunRecord rec = run_bw_optimize(cfg);
    const auto rows = data_rows(rec.csv);
    REQUIRE(rows.size() == 1);
    const auto c = cells(rows[0]);
    REQUIRE(c.size() == 14);
    CHECK(std::stod(c[1]) > 2.0); // the optimized signal beats the classical bound here
    CHECK(std::stod(c[12]) <= 1e-8);
    CHECK(has_footer(rec, "best_signal"));
    CHECK(run_bw_optimize(cfg).csv == rec.csv);
}

TEST_CASE("gate fidelity run") {
    SweepConfig cfg;
    cfg.mode = "gate-fidelity";
    cfg.gate_points = 60;
    cfg.gate_alpha = 0.5;
    const RunRecord rec = run_gate_fidelity(cfg);
    const auto rows = data_rows(rec.csv);
    REQUIRE(rows.size() == 60);
    const auto first = cells(rows[0]);
    CHECK(first[0] == "0");
    CHECK(std::stod(first[1]) == doctest::Approx(1.0).epsilon(1e-12));
    for (const char* key : {"f_tau", "revival_period", "phase_gate_error", "delta", "eps",
                            "tau", "regime_ratio"})
        CHECK(has_footer(rec, key));
    CHECK(run_gate_fidelity(cfg).csv == rec.csv);
}

TEST_CASE("verify run passes on defaults") {
    SweepConfig cfg;
    cfg.mode = "verify";
    cfg.restarts = 6; // trims the recorded complex-vs-real comparison
    const RunRecord rec = run_verify(cfg);
    CHECK(rec.ok);
    CHECK(rec.exit_code == 0);
    CHECK(rec.csv.find(",fail\n") == std::string::npos);
    CHECK(rec.csv.find(",pass\n") != std::string::npos);
    CHECK(rec.csv.find("bw_complex_minus_real_optimum") != std::string::npos);
    for (const char* name : {"correlation_analytic_vs_numeric", "bw_oracle_vs_operator",
                             "vacuum_sector_closed_form", "integrator_vs_static_frame",
                             "truncation_convergence", "rotation_overlap_sqrt2",
                             "tsirelson_overshoot", "mixture_chsh_overshoot",
                             "phase_independence"})
        CHECK(rec.csv.find(name) != std::string::npos);
}

TEST_CASE("verify run surfaces a forced-low truncation as a named failure") {
    SweepConfig cfg;
    cfg.mode = "verify";
    cfg.restarts = 2;
    cfg.dim_override = 8; // far too small for alpha = 2
    const RunRecord rec = run_verify(cfg);
    CHECK(!rec.ok);
    CHECK(rec.exit_code == 3);
    CHECK(rec.csv.find("truncation_convergence,nan,") != std::string::npos);
    CHECK(rec.csv.find(",fail\n") != std::string::npos);
}

TEST_CASE("svg plot emission") {
    std::vector<std::pair<double, double>> a{{0.0, 1.0}, {1.0, 2.0}, {2.0, 1.5}};
    std::vector<std::pair<double, double>> b{{0.0, 0.5}, {1.0, 0.7}, {2.0, 2.5}};
    const std::string svg = svg_plot({{"first", a}, {"second", b}}, "x", "y");
    CHECK(svg.rfind("<svg ", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    size_t n = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++n;
        pos += 9;
    }
    CHECK(n == 2);
    CHECK(svg.find("first") != std::string::npos);
    CHECK(svg.find("second") != std::string::npos);
}
