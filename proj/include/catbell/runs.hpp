#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catbell/bw.hpp"
#include "catbell/gate.hpp"

// Configuration-driven run layer behind the CLI: figure-reproduction sweeps,
// single-point evaluations, the displacement optimizer, the gate fidelity
// curve, and the oracle cross-check suite, all emitting deterministic CSV
// (identical config + seed => byte-identical output; timing therefore goes
// to stderr, never into the CSV).

namespace catbell {

inline constexpr const char* kVersion = "1.0.0";

struct Range {
    double start = 0.0, stop = 0.0, step = 1.0;
    int count() const; // throws ConfigError on empty/invalid ranges
    double at(int i) const { return start + i * step; }
    std::string str() const;
};

// "start:stop:step", or a bare number for a single-point range
Range parse_range(const std::string& text);

struct SweepConfig {
    std::string mode; // correlations | bell-sweep | bell-grid | bw-optimize | gate-fidelity | verify
    Range alpha{0.0, 3.0, 0.01};
    std::optional<Range> alpha1, alpha2; // grid mode
    double theta = 0.0;
    int dim_override = 0; // 0 = automatic truncation rule
    int restarts = 32;
    std::uint64_t seed = kDefaultSeed;
    int jobs = 0; // 0 = available parallelism
    std::string out_path;
    bool plot = false;
    // gate-fidelity parameters (rates in units of chi)
    double omega = 0.2;
    double gate_phi = M_PI / 4.0;
    double gate_alpha = 2.0;
    int gate_points = 2000;

    void validate() const; // throws ConfigError
    int effective_jobs() const;
};

struct RunRecord {
    std::string csv;                                       // complete file body
    std::vector<std::pair<std::string, double>> footer;    // named summary values
    std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> plot_series;
    bool ok = true;
    int exit_code = 0;
    double wall_seconds = 0.0; // stderr only
};

RunRecord run_correlations(const SweepConfig& cfg);
RunRecord run_bell_sweep(const SweepConfig& cfg); // sweep and grid flavors
RunRecord run_bw_optimize(const SweepConfig& cfg);
RunRecord run_gate_fidelity(const SweepConfig& cfg);
RunRecord run_verify(const SweepConfig& cfg);
RunRecord run_mode(const SweepConfig& cfg); // dispatch on cfg.mode

// 17 significant digits via to_chars: locale-independent, reproducible bytes
std::string format_g17(double v);

// minimal line plot (fixed palette, axes, legend); returned as the file body
std::string svg_plot(const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series,
                     const std::string& xlabel, const std::string& ylabel);

// ascending-grid helpers used for the sweep footer thresholds
double interpolate_crossing(double x0, double y0, double x1, double y1, double level);

} // namespace catbell
