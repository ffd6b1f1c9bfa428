// catbell: entangled-coherent-state Bell signals and the dispersive phase
// gate, driven by flags or an INI config (flags win). All result bytes go to
// the output file; progress, footer values and timing go to stderr so that
// identical configs produce byte-identical artifacts.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "catbell/runs.hpp"

namespace {

std::string plot_path(const std::string& out) {
    const size_t dot = out.rfind('.');
    if (dot == std::string::npos || out.find('/', dot) != std::string::npos)
        return out + ".svg";
    return out.substr(0, dot) + ".svg";
}

int write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    f << body;
    f.flush();
    if (!f) {
        std::cerr << "error: cannot write " << path << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"entangled-coherent-state Bell signals and dispersive-gate simulation"};
    app.require_subcommand(0, 1);
    app.set_config("--config", "", "INI config file; explicit flags override it");

    catbell::SweepConfig cfg;
    std::string alpha_text, alpha1_text, alpha2_text;
    app.add_option("--mode", cfg.mode,
                   "run mode (normally given as a subcommand): correlations | bell-sweep | "
                   "bell-grid | bw-optimize | gate-fidelity | verify");
    app.add_option("--alpha", alpha_text, "coherent amplitude, start:stop:step or a number");
    app.add_option("--alpha1", alpha1_text, "mode-1 amplitude range (bell-grid)");
    app.add_option("--alpha2", alpha2_text, "mode-2 amplitude range (bell-grid)");
    app.add_option("--theta", cfg.theta, "superposition phase theta");
    app.add_option("--dim", cfg.dim_override, "force the Fock-space dimension (0 = automatic)");
    app.add_option("--restarts", cfg.restarts, "optimizer restart budget (bw modes)");
    app.add_option("--seed", cfg.seed, "RNG seed for optimizer restarts and verify draws");
    app.add_option("--jobs", cfg.jobs, "worker threads (0 = available cores)");
    app.add_option("--out", cfg.out_path, "output CSV path (default <mode>.csv)");
    app.add_flag("--plot", cfg.plot, "also write an SVG plot next to the CSV");
    app.add_option("--omega", cfg.omega, "drive amplitude in units of chi (gate-fidelity)");
    app.add_option("--gate-phi", cfg.gate_phi, "target vacuum phase (gate-fidelity)");
    app.add_option("--gate-alpha", cfg.gate_alpha, "cat amplitude alpha; oscillator starts in "
                                                   "|2 alpha> (gate-fidelity)");
    app.add_option("--gate-points", cfg.gate_points, "fidelity curve sample count");

    for (const char* name : {"correlations", "bell-sweep", "bell-grid", "bw-optimize",
                             "gate-fidelity", "verify"}) {
        CLI::App* sub = app.add_subcommand(name, "");
        sub->fallthrough();
        sub->callback([&cfg, name] { cfg.mode = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (!alpha_text.empty()) cfg.alpha = catbell::parse_range(alpha_text);
        if (!alpha1_text.empty()) cfg.alpha1 = catbell::parse_range(alpha1_text);
        if (!alpha2_text.empty()) cfg.alpha2 = catbell::parse_range(alpha2_text);
        if (cfg.mode.empty())
            throw catbell::ConfigError("no mode given; pass a subcommand or mode= in the config");
        if (cfg.out_path.empty()) cfg.out_path = cfg.mode + ".csv";
        cfg.validate();

        const auto t0 = std::chrono::steady_clock::now();
        catbell::RunRecord rec = catbell::run_mode(cfg);
        rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        if (write_file(cfg.out_path, rec.csv)) return 1;
        std::cerr << "wrote " << cfg.out_path << " (" << rec.csv.size() << " bytes) in "
                  << rec.wall_seconds << " s\n";
        for (const auto& [k, v] : rec.footer)
            std::cerr << "  " << k << " = " << catbell::format_g17(v) << "\n";

        if (cfg.plot) {
            if (rec.plot_series.empty()) {
                std::cerr << "note: mode '" << cfg.mode << "' has no plot; skipping --plot\n";
            } else {
                const std::string xl = cfg.mode == "gate-fidelity" ? "t (1/chi)" : "alpha";
                const std::string yl = cfg.mode == "gate-fidelity"  ? "fidelity"
                                       : cfg.mode == "correlations" ? "correlation"
                                                                    : "CHSH signal";
                const std::string pp = plot_path(cfg.out_path);
                if (write_file(pp, catbell::svg_plot(rec.plot_series, xl, yl))) return 1;
                std::cerr << "wrote " << pp << "\n";
            }
        }
        return rec.exit_code;
    } catch (const catbell::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const catbell::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const catbell::TruncationError& e) {
        std::cerr << "truncation error: " << e.what() << " (dimension " << e.required_dim
                  << " would satisfy the tail bound)\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    }
}
