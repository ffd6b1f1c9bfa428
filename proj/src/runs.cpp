#include "catbell/runs.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <thread>

#include "catbell/neldermead.hpp"

namespace catbell {

namespace {

constexpr double kTwoSqrt2 = 2.0 * M_SQRT2;

double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    const int workers = std::max(1, std::min(jobs, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

void comment(std::string& out, const std::string& key, const std::string& value) {
    out += "# ";
    out += key;
    out += ": ";
    out += value;
    out += "\n";
}

std::string header_block(const SweepConfig& cfg,
                         const std::vector<std::pair<std::string, std::string>>& extra,
                         const std::string& columns) {
    std::string h;
    comment(h, "catbell", kVersion);
    comment(h, "mode", cfg.mode);
    comment(h, "theta", format_g17(cfg.theta));
    comment(h, "seed", std::to_string(cfg.seed));
    comment(h, "dim", cfg.dim_override > 0 ? std::to_string(cfg.dim_override) : "auto");
    for (const auto& [k, v] : extra) comment(h, k, v);
    comment(h, "columns", columns);
    return h;
}

void append_row(std::string& out, const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
}

void append_footer(std::string& out, RunRecord& rec, const std::string& key, double value) {
    rec.footer.emplace_back(key, value);
    comment(out, key, format_g17(value));
}

// vertex of the parabola through three equally spaced samples around i
double quadratic_vertex(const std::vector<double>& x, const std::vector<double>& y, int i) {
    const double denom = y[i + 1] - 2.0 * y[i] + y[i - 1];
    if (denom == 0.0) return x[i];
    return x[i] - 0.5 * (x[i + 1] - x[i]) * (y[i + 1] - y[i - 1]) / denom;
}

} // namespace

int Range::count() const {
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) || step <= 0.0)
        throw ConfigError("range " + str() + ": step must be positive and finite");
    if (stop < start) throw ConfigError("range " + str() + ": stop below start");
    return static_cast<int>(std::llround((stop - start) / step)) + 1;
}

std::string Range::str() const {
    return format_g17(start) + ":" + format_g17(stop) + ":" + format_g17(step);
}

Range parse_range(const std::string& text) {
    const auto bad = [&] { return ConfigError("cannot parse range '" + text + "'"); };
    std::vector<double> parts;
    size_t pos = 0;
    while (true) {
        const size_t colon = text.find(':', pos);
        const std::string piece = text.substr(pos, colon == std::string::npos ? colon : colon - pos);
        try {
            size_t used = 0;
            parts.push_back(std::stod(piece, &used));
            if (used != piece.size()) throw bad();
        } catch (const ConfigError&) {
            throw;
        } catch (...) {
            throw bad();
        }
        if (colon == std::string::npos) break;
        pos = colon + 1;
    }
    if (parts.size() == 1) return Range{parts[0], parts[0], 1.0};
    if (parts.size() != 3) throw bad();
    Range r{parts[0], parts[1], parts[2]};
    r.count(); // validates
    return r;
}

void SweepConfig::validate() const {
    static const std::set<std::string> kModes{"correlations", "bell-sweep", "bell-grid",
                                             "bw-optimize", "gate-fidelity", "verify"};
    if (!kModes.count(mode))
        throw ConfigError("unknown mode '" + mode + "'");
    if (!std::isfinite(theta)) throw ConfigError("theta must be finite");
    if (restarts < 1) throw ConfigError("restarts must be >= 1");
    if (dim_override < 0) throw ConfigError("dim override must be positive");
    if (jobs < 0) throw ConfigError("jobs must be positive");
    if (gate_points < 2) throw ConfigError("gate points must be >= 2");
    if (!(omega > 0.0)) throw ConfigError("omega must be positive");
    alpha.count();
    if (alpha1) alpha1->count();
    if (alpha2) alpha2->count();
}

int SweepConfig::effective_jobs() const {
    if (jobs > 0) return jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string format_g17(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double interpolate_crossing(double x0, double y0, double x1, double y1, double level) {
    if (y1 == y0) return x0;
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

RunRecord run_correlations(const SweepConfig& cfg) {
    const int n = cfg.alpha.count();
    const AngleSettings ang = canonical_angles(cfg.theta);
    const std::string columns =
        "alpha,ecs_e_11,ecs_e_12p,ecs_e_1p2,ecs_e_1p2p,"
        "mix_e_11,mix_e_12p,mix_e_1p2,mix_e_1p2p,concurrence,dim,path_gap";

    struct Row {
        double a, e[4], m[4], conc, gap;
        int dim;
    };
    std::vector<Row> rows(n);
    parallel_for(n, cfg.effective_jobs(), [&](int i) {
        const double a = cfg.alpha.at(i);
        const EcsSpec spec{a, a, cfg.theta};
        const std::pair<double, double> pairs[4] = {{ang.phi1, ang.phi2},
                                                    {ang.phi1, ang.phi2p},
                                                    {ang.phi1p, ang.phi2},
                                                    {ang.phi1p, ang.phi2p}};
        Row& r = rows[i];
        r.a = a;
        r.gap = 0.0;
        r.dim = 0;
        for (int k = 0; k < 4; ++k) {
            const auto rep = correlation_numeric(spec, pairs[k].first, pairs[k].second,
                                                 cfg.dim_override);
            r.e[k] = rep.value_numeric;
            r.m[k] = correlation_mixture(spec, pairs[k].first, pairs[k].second);
            r.gap = std::max(r.gap, rep.discrepancy);
            r.dim = std::max(r.dim, rep.truncation_dim);
        }
        r.conc = concurrence(spec);
    });

    RunRecord rec;
    rec.csv = header_block(cfg, {{"alpha", cfg.alpha.str()}}, columns);
    for (const Row& r : rows)
        append_row(rec.csv,
                   {format_g17(r.a), format_g17(r.e[0]), format_g17(r.e[1]), format_g17(r.e[2]),
                    format_g17(r.e[3]), format_g17(r.m[0]), format_g17(r.m[1]), format_g17(r.m[2]),
                    format_g17(r.m[3]), format_g17(r.conc), std::to_string(r.dim),
                    format_g17(r.gap)});

    const char* names[4] = {"E(phi1,phi2)", "E(phi1,phi2')", "E(phi1',phi2)", "E(phi1',phi2')"};
    for (int k = 0; k < 4; ++k) {
        std::vector<std::pair<double, double>> s(n);
        for (int i = 0; i < n; ++i) s[i] = {rows[i].a, rows[i].e[k]};
        rec.plot_series.emplace_back(names[k], std::move(s));
    }
    std::vector<std::pair<double, double>> mix(n);
    for (int i = 0; i < n; ++i) mix[i] = {rows[i].a, rows[i].m[0]};
    rec.plot_series.emplace_back("mixture E(phi1,phi2)", std::move(mix));
    return rec;
}

RunRecord run_bell_sweep(const SweepConfig& cfg) {
    const AngleSettings ang = canonical_angles(cfg.theta);
    RunRecord rec;

    if (cfg.mode == "bell-grid") {
        const Range r1 = cfg.alpha1.value_or(Range{0.0, 2.0, 0.05});
        const Range r2 = cfg.alpha2.value_or(Range{0.0, 2.0, 0.05});
        const int n1 = r1.count(), n2 = r2.count();
        struct Row {
            double s, gap;
            int dim;
        };
        std::vector<Row> rows(size_t(n1) * n2);
        parallel_for(n1 * n2, cfg.effective_jobs(), [&](int idx) {
            const EcsSpec spec{r1.at(idx / n2), r2.at(idx % n2), cfg.theta};
            const double num = bell_signal_rp_numeric(spec, ang, cfg.dim_override);
            rows[idx].s = num;
            rows[idx].gap = std::abs(num - bell_signal_rp(spec, ang));
            rows[idx].dim = cfg.dim_override > 0
                                ? cfg.dim_override
                                : std::max(default_dim(2.0 * std::abs(spec.alpha1)),
                                           default_dim(2.0 * std::abs(spec.alpha2)));
        });
        rec.csv = header_block(cfg, {{"alpha1", r1.str()}, {"alpha2", r2.str()}},
                               "alpha1,alpha2,s_rp,dim,path_gap");
        for (int i = 0; i < n1 * n2; ++i)
            append_row(rec.csv, {format_g17(r1.at(i / n2)), format_g17(r2.at(i % n2)),
                                 format_g17(rows[i].s), std::to_string(rows[i].dim),
                                 format_g17(rows[i].gap)});
        return rec;
    }

    const int n = cfg.alpha.count();
    struct Row {
        double srp, sbw, gap;
        int dim;
        bool conv;
    };
    std::vector<Row> rows(n);
    parallel_for(n, cfg.effective_jobs(), [&](int i) {
        const double a = cfg.alpha.at(i);
        const EcsSpec spec{a, a, cfg.theta};
        Row& r = rows[i];
        const double num = bell_signal_rp_numeric(spec, ang, cfg.dim_override);
        r.srp = num;
        r.gap = std::abs(num - bell_signal_rp(spec, ang));
        r.dim = cfg.dim_override > 0 ? cfg.dim_override : default_dim(2.0 * a);
        const auto opt = optimize_bw(spec, cfg.restarts, cfg.seed, 1);
        r.sbw = opt.best_signal;
        r.conv = opt.converged;
    });

    rec.csv = header_block(cfg, {{"alpha", cfg.alpha.str()}, {"restarts", std::to_string(cfg.restarts)}},
                           "alpha,s_rp,s_bw,bw_converged,dim,path_gap");
    for (int i = 0; i < n; ++i)
        append_row(rec.csv, {format_g17(cfg.alpha.at(i)), format_g17(rows[i].srp),
                             format_g17(rows[i].sbw), rows[i].conv ? "1" : "0",
                             std::to_string(rows[i].dim), format_g17(rows[i].gap)});

    // footer thresholds: S_RP minimum, S_RP = 2 upward crossing, and the
    // last alpha where the optimized displaced-parity signal still wins
    std::vector<double> xs(n), srp(n), diff(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = cfg.alpha.at(i);
        srp[i] = rows[i].srp;
        diff[i] = rows[i].srp - rows[i].sbw;
    }
    double min_alpha = std::nan("");
    double cross2 = std::nan("");
    double overtake = std::nan("");
    if (n >= 3) {
        int imin = 0;
        for (int i = 1; i < n; ++i)
            if (srp[i] < srp[imin]) imin = i;
        if (imin > 0 && imin + 1 < n) min_alpha = quadratic_vertex(xs, srp, imin);
        for (int i = imin; i + 1 < n; ++i)
            if (srp[i] < 2.0 && srp[i + 1] >= 2.0) {
                cross2 = interpolate_crossing(xs[i], srp[i], xs[i + 1], srp[i + 1], 2.0);
                break;
            }
        for (int i = n - 2; i >= 0; --i)
            if (diff[i] <= 0.0 && diff[i + 1] > 0.0) {
                overtake = interpolate_crossing(xs[i], diff[i], xs[i + 1], diff[i + 1], 0.0);
                break;
            }
    }
    append_footer(rec.csv, rec, "srp_min_alpha", min_alpha);
    append_footer(rec.csv, rec, "srp_crosses_two_alpha", cross2);
    append_footer(rec.csv, rec, "srp_overtakes_sbw_alpha", overtake);

    std::vector<std::pair<double, double>> s1(n), s2(n);
    for (int i = 0; i < n; ++i) {
        s1[i] = {xs[i], srp[i]};
        s2[i] = {xs[i], rows[i].sbw};
    }
    rec.plot_series.emplace_back("S_RP", std::move(s1));
    rec.plot_series.emplace_back("S_BW (optimized)", std::move(s2));
    return rec;
}

RunRecord run_bw_optimize(const SweepConfig& cfg) {
    const int n = cfg.alpha.count();
    RunRecord rec;
    rec.csv = header_block(
        cfg, {{"alpha", cfg.alpha.str()}, {"restarts", std::to_string(cfg.restarts)}},
        "alpha,s_bw,re_b1,im_b1,re_b2,im_b2,re_b1p,im_b1p,re_b2p,im_b2p,"
        "restarts_used,converged,oracle_operator_gap,dim_check");

    for (int i = 0; i < n; ++i) {
        const double a = cfg.alpha.at(i);
        const EcsSpec spec{a, a, cfg.theta};
        const auto opt = optimize_bw(spec, cfg.restarts, cfg.seed, cfg.effective_jobs());
        const DisplacementSettings& s = opt.best_settings;

        // re-evaluate the winning settings on the truncated-operator path
        double gap = 0.0;
        int dim_check = 0;
        const std::pair<cxd, cxd> pairs[4] = {{s.b1, s.b2}, {s.b1, s.b2p}, {s.b1p, s.b2}, {s.b1p, s.b2p}};
        for (const auto& [b1, b2] : pairs) {
            gap = std::max(gap, std::abs(bw_correlation(spec, b1, b2, cfg.dim_override) -
                                         bw_correlation_oracle(spec, b1, b2)));
            const int d = cfg.dim_override > 0
                              ? cfg.dim_override
                              : std::max(default_dim(std::abs(spec.alpha1) + std::abs(b1)),
                                         default_dim(std::abs(spec.alpha2) + std::abs(b2)));
            dim_check = std::max(dim_check, d);
        }
        append_row(rec.csv,
                   {format_g17(a), format_g17(opt.best_signal), format_g17(s.b1.real()),
                    format_g17(s.b1.imag()), format_g17(s.b2.real()), format_g17(s.b2.imag()),
                    format_g17(s.b1p.real()), format_g17(s.b1p.imag()), format_g17(s.b2p.real()),
                    format_g17(s.b2p.imag()), std::to_string(opt.restarts_used),
                    opt.converged ? "1" : "0", format_g17(gap), std::to_string(dim_check)});
        if (n == 1) {
            append_footer(rec.csv, rec, "best_signal", opt.best_signal);
            append_footer(rec.csv, rec, "oracle_operator_gap", gap);
        }
    }
    return rec;
}

RunRecord run_gate_fidelity(const SweepConfig& cfg) {
    const PulseParams p = pulse_for_phase(cfg.gate_phi, cfg.omega, 1.0);
    const auto curve = fidelity_curve(p, cfg.gate_alpha, cfg.gate_points);
    const int dim = default_dim(2.0 * cfg.gate_alpha);

    RunRecord rec;
    rec.csv = header_block(cfg,
                           {{"omega", format_g17(cfg.omega)},
                            {"phi", format_g17(cfg.gate_phi)},
                            {"gate_alpha", format_g17(cfg.gate_alpha)},
                            {"points", std::to_string(cfg.gate_points)}},
                           "t,fidelity,dim");
    for (const auto& [t, f] : curve)
        append_row(rec.csv, {format_g17(t), format_g17(f), std::to_string(dim)});

    append_footer(rec.csv, rec, "delta", p.delta);
    append_footer(rec.csv, rec, "eps", p.eps);
    append_footer(rec.csv, rec, "tau", p.tau);
    append_footer(rec.csv, rec, "regime_ratio", p.regime_ratio);
    append_footer(rec.csv, rec, "regime_warning", p.regime_warning ? 1.0 : 0.0);
    append_footer(rec.csv, rec, "f_tau", curve.back().second);
    append_footer(rec.csv, rec, "revival_period", revival_period(curve, p.chi));
    append_footer(rec.csv, rec, "revival_target", 2.0 * M_PI / std::abs(p.chi));
    append_footer(rec.csv, rec, "phase_gate_error", phase_gate_error(p, cfg.gate_alpha));

    rec.plot_series.emplace_back("F(t)", curve);
    return rec;
}

RunRecord run_verify(const SweepConfig& cfg) {
    struct Check {
        std::string name;
        double measured;
        double threshold;
        bool pass;
        bool info = false;
    };
    std::vector<Check> checks;
    bool truncation_failure = false;
    std::mt19937_64 rng(cfg.seed);
    const auto rnd = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };
    const auto rndc = [&](double max_abs) {
        const double mag = rnd(0.0, max_abs), ph = rnd(0.0, 2.0 * M_PI);
        return cxd(mag * std::cos(ph), mag * std::sin(ph));
    };

    { // closed-form vs operator-path correlations
        double worst = 0.0;
        for (int k = 0; k < 60; ++k) {
            const EcsSpec spec{rndc(2.2), rndc(2.2), rnd(0.0, 2.0 * M_PI)};
            const auto rep = correlation_numeric(spec, rnd(-M_PI, M_PI), rnd(-M_PI, M_PI));
            worst = std::max(worst, rep.discrepancy);
        }
        checks.push_back({"correlation_analytic_vs_numeric", worst, 1e-8, worst <= 1e-8});
    }
    { // displaced-parity overlap oracle vs truncated operators
        double worst = 0.0;
        for (int k = 0; k < 40; ++k) {
            const EcsSpec spec{rndc(2.0), rndc(2.0), rnd(0.0, 2.0 * M_PI)};
            const cxd b1 = rndc(2.0), b2 = rndc(2.0);
            worst = std::max(worst, std::abs(bw_correlation(spec, b1, b2) -
                                             bw_correlation_oracle(spec, b1, b2)));
        }
        checks.push_back({"bw_oracle_vs_operator", worst, 1e-8, worst <= 1e-8});
    }
    { // vacuum-sector closed form against the production propagator
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            const double phi = (k % 2 ? 1.0 : -1.0) * rnd(0.15, 2.0 * M_PI - 0.15);
            const PulseParams p = pulse_for_phase(phi, rnd(0.02, 0.3), 1.0);
            QubitOscState init;
            init.dim = 4;
            init.amps = VectorXcd::Zero(8);
            init.amps(0) = 1.0;
            const std::vector<double> grid{0.25 * p.tau, 0.5 * p.tau, 0.75 * p.tau, p.tau};
            const auto states = propagate(p, init, grid);
            for (size_t g = 0; g < grid.size(); ++g) {
                const auto ref = vacuum_evolution_closed_form(p, grid[g], 4);
                worst = std::max(worst, (states[g].amps - ref.amps).norm());
            }
        }
        checks.push_back({"vacuum_sector_closed_form", worst, 1e-6, worst <= 1e-6});
    }
    { // time-dependent RK4 vs static-frame exponentiation at the gate defaults
        const PulseParams p = pulse_for_phase(cfg.gate_phi, cfg.omega, 1.0);
        const int dim = default_dim(2.0 * cfg.gate_alpha);
        QubitOscState init;
        init.dim = dim;
        init.amps = VectorXcd::Zero(2 * dim);
        init.amps.head(dim) = coherent_state(FockSpace(dim), 2.0 * cfg.gate_alpha);
        const std::vector<double> grid{0.5 * p.tau, p.tau};
        const auto a = propagate(p, init, grid, PropagationMethod::StaticFrame);
        const auto b = propagate(p, init, grid, PropagationMethod::Rk4);
        double worst = 0.0;
        for (size_t g = 0; g < grid.size(); ++g)
            worst = std::max(worst, (a[g].amps - b[g].amps).norm());
        checks.push_back({"integrator_vs_static_frame", worst, 1e-8, worst <= 1e-8});
    }
    { // truncation convergence: default rule vs +10 levels
        try {
            const EcsSpec spec{2.0, 2.0, cfg.theta};
            const int d = cfg.dim_override > 0 ? cfg.dim_override : default_dim(4.0);
            const double c0 = correlation_numeric(spec, 0.0, M_PI / 4.0, d).value_numeric;
            const double c1 = correlation_numeric(spec, 0.0, M_PI / 4.0, d + 10).value_numeric;
            const EcsSpec spec2{1.1, 1.1, cfg.theta};
            const int db = cfg.dim_override > 0 ? cfg.dim_override : default_dim(1.4);
            const double b0 = bw_correlation(spec2, cxd(0.0, 0.3), cxd(0.0, 0.3), db);
            const double b1 = bw_correlation(spec2, cxd(0.0, 0.3), cxd(0.0, 0.3), db + 10);
            const double worst = std::max(std::abs(c0 - c1), std::abs(b0 - b1));
            checks.push_back({"truncation_convergence", worst, 1e-8, worst <= 1e-8});
        } catch (const TruncationError& e) {
            checks.push_back({"truncation_convergence", std::nan(""), 1e-8, false});
            truncation_failure = true;
        }
    }
    { // cat-qubit rotation keeps |alpha> fixed at alpha = sqrt(2), phi = pi/4
        const FockSpace f(default_dim(2.0 * M_SQRT2));
        const VectorXcd a = coherent_state(f, M_SQRT2);
        const VectorXcd v = rotation_z(f, M_SQRT2, M_PI / 4.0) * a;
        const double overlap = std::norm(a.dot(v)) / v.squaredNorm();
        checks.push_back({"rotation_overlap_sqrt2", overlap, 0.999, overlap > 0.999});
    }
    { // Tsirelson bound on randomized states and angles
        double worst = -kTwoSqrt2;
        for (int k = 0; k < 30; ++k) {
            const EcsSpec spec{rndc(2.5), rndc(2.5), rnd(0.0, 2.0 * M_PI)};
            AngleSettings a = canonical_angles(spec.theta);
            if (k % 2) a = {rnd(-M_PI, M_PI), rnd(-M_PI, M_PI), rnd(-M_PI, M_PI), rnd(-M_PI, M_PI)};
            worst = std::max(worst, bell_signal_rp(spec, a) - kTwoSqrt2);
        }
        checks.push_back({"tsirelson_overshoot", worst, 1e-9, worst <= 1e-9});
    }
    { // classical-mixture CHSH stays below 2
        double worst = -2.0;
        const AngleSettings a = canonical_angles(cfg.theta);
        for (int i = 0; i <= 60; ++i) {
            const EcsSpec spec{i * 0.05, i * 0.05, cfg.theta};
            const double s = std::abs(correlation_mixture(spec, a.phi1, a.phi2) +
                                      correlation_mixture(spec, a.phi1, a.phi2p) +
                                      correlation_mixture(spec, a.phi1p, a.phi2) -
                                      correlation_mixture(spec, a.phi1p, a.phi2p));
            worst = std::max(worst, s - 2.0);
        }
        checks.push_back({"mixture_chsh_overshoot", worst, 1e-9, worst <= 1e-9});
    }
    { // correlations depend only on |alpha_j|
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            const double a1 = rnd(0.1, 2.0), a2 = rnd(0.1, 2.0), th = rnd(0.0, 2.0 * M_PI);
            const double p1 = rnd(-M_PI, M_PI), p2 = rnd(-M_PI, M_PI);
            const cxd r1 = std::exp(cxd(0.0, rnd(0.0, 2.0 * M_PI)));
            const cxd r2 = std::exp(cxd(0.0, rnd(0.0, 2.0 * M_PI)));
            const double base = correlation_numeric(EcsSpec{a1, a2, th}, p1, p2).value_numeric;
            const double rot = correlation_numeric(EcsSpec{a1 * r1, a2 * r2, th}, p1, p2).value_numeric;
            worst = std::max(worst, std::abs(base - rot));
        }
        checks.push_back({"phase_independence", worst, 1e-8, worst <= 1e-8});
    }
    { // recorded (not asserted): complex-vs-real displacement optimum gap
        const EcsSpec spec{1.1, 1.1, cfg.theta};
        const int budget = std::min(cfg.restarts, 12);
        const double full = optimize_bw(spec, budget, cfg.seed).best_signal;
        // real-restricted rerun of the same scheme in 4 parameters
        const double box = bw_search_box(spec);
        const Eigen::VectorXd lo = Eigen::VectorXd::Constant(4, -box);
        const Eigen::VectorXd hi = Eigen::VectorXd::Constant(4, box);
        const auto obj = [&spec](const Eigen::VectorXd& x) {
            return -bell_signal_bw(spec, DisplacementSettings{cxd(x(0), 0.0), cxd(x(1), 0.0),
                                                              cxd(x(2), 0.0), cxd(x(3), 0.0)});
        };
        double best_real = 0.0;
        for (int r = 0; r < budget; ++r) {
            std::mt19937_64 rr(cfg.seed + 0x9e3779b97f4a7c15ULL * (r + 1));
            const double scale = box * std::pow(0.25, r % 4);
            std::vector<Eigen::VectorXd> simplex(5, Eigen::VectorXd(4));
            for (auto& v : simplex)
                for (int d = 0; d < 4; ++d) v(d) = scale * (2.0 * u01(rr) - 1.0);
            best_real = std::max(best_real, -nelder_mead(obj, std::move(simplex), lo, hi, 1e-9, 5000).value);
        }
        checks.push_back({"bw_complex_minus_real_optimum", full - best_real, std::nan(""), true, true});
    }

    RunRecord rec;
    rec.csv = header_block(cfg, {{"restarts", std::to_string(cfg.restarts)}},
                           "check,measured,threshold,status");
    bool all_pass = true;
    int passed = 0, gated = 0;
    for (const auto& c : checks) {
        append_row(rec.csv, {c.name, format_g17(c.measured), format_g17(c.threshold),
                             c.info ? "info" : (c.pass ? "pass" : "fail")});
        if (c.info) continue;
        ++gated;
        if (c.pass) ++passed;
        else all_pass = false;
    }
    append_footer(rec.csv, rec, "checks_passed", passed);
    append_footer(rec.csv, rec, "checks_total", gated);
    rec.ok = all_pass;
    rec.exit_code = all_pass ? 0 : (truncation_failure ? 3 : 2);
    return rec;
}

RunRecord run_mode(const SweepConfig& cfg) {
    cfg.validate();
    if (cfg.mode == "correlations") return run_correlations(cfg);
    if (cfg.mode == "bell-sweep" || cfg.mode == "bell-grid") return run_bell_sweep(cfg);
    if (cfg.mode == "bw-optimize") return run_bw_optimize(cfg);
    if (cfg.mode == "gate-fidelity") return run_gate_fidelity(cfg);
    return run_verify(cfg);
}

std::string svg_plot(const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series,
                     const std::string& xlabel, const std::string& ylabel) {
    constexpr double W = 860, H = 540, L = 70, R = 24, T = 24, B = 56;
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [name, pts] : series)
        for (const auto& [x, y] : pts) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) xmax = xmin + 1;
    const double pad = 0.05 * (ymax - ymin == 0.0 ? 1.0 : ymax - ymin);
    ymin -= pad;
    ymax += pad;
    const auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    const auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    char buf[256];
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"540\" "
         "viewBox=\"0 0 860 540\">\n";
    s += "<rect width=\"860\" height=\"540\" fill=\"white\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ddd\"/>\n",
                      px(xv), py(ymin), px(xv), py(ymax));
        s += buf;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ddd\"/>\n",
                      px(xmin), py(yv), px(xmax), py(yv));
        s += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" text-anchor=\"middle\">%.6g</text>\n",
                      px(xv), H - B + 18, xv);
        s += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" text-anchor=\"end\">%.6g</text>\n",
                      L - 6, py(yv) + 4, yv);
        s += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" "
                  "stroke=\"black\"/>\n",
                  L, T, W - L - R, H - T - B);
    s += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"14\" text-anchor=\"middle\">%s</text>\n",
                  (L + W - R) / 2, H - 14, xlabel.c_str());
    s += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"18\" y=\"%.2f\" font-size=\"14\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 18 %.2f)\">%s</text>\n",
                  (T + H - B) / 2, (T + H - B) / 2, ylabel.c_str());
    s += buf;

    for (size_t k = 0; k < series.size(); ++k) {
        const char* color = kPalette[k % 8];
        std::string pts;
        for (const auto& [x, y] : series[k].second) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(x), py(y));
            pts += buf;
        }
        s += "<polyline fill=\"none\" stroke=\"";
        s += color;
        s += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%.2f\" y=\"%.2f\" width=\"10\" height=\"10\" fill=\"%s\"/>"
                      "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\">%s</text>\n",
                      W - R - 220.0, T + 10.0 + 18.0 * k, color, W - R - 205.0,
                      T + 19.0 + 18.0 * k, series[k].first.c_str());
        s += buf;
    }
    s += "</svg>\n";
    return s;
}

} // namespace catbell
