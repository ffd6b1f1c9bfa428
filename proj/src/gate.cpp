#include "catbell/gate.hpp"

#include <cmath>

namespace catbell {

namespace {

cxd iu(double x) { return cxd(0.0, x); }

// frame with the drive static: per-level 2x2 propagator for levels n, acting
// on (g_n, e_n); the lab frame restores e^{i delta t} on the excited block
void static_frame_apply(const PulseParams& p, const VectorXcd& in, double t, VectorXcd& out) {
    const int dim = static_cast<int>(in.size()) / 2;
    for (int n = 0; n < dim; ++n) {
        const double d = p.delta + p.chi * n;
        const double epsn = std::sqrt(p.omega * p.omega + d * d / 4.0);
        const cxd ph = std::exp(iu(-d * t / 2.0));
        const double c = std::cos(epsn * t);
        const double s = epsn == 0.0 ? t : std::sin(epsn * t) / epsn;
        const cxd m00 = ph * (c + iu(d / 2.0) * s);
        const cxd m01 = ph * iu(-p.omega) * s;
        const cxd m11 = ph * (c - iu(d / 2.0) * s);
        const cxd g = in(n), e = in(dim + n);
        out(n) = m00 * g + m01 * e;
        out(dim + n) = std::exp(iu(p.delta * t)) * (m01 * g + m11 * e);
    }
}

// -i H(t) psi for the time-dependent generator in the lab frame
void generator_apply(const PulseParams& p, double t, const VectorXcd& y, VectorXcd& out) {
    const int dim = static_cast<int>(y.size()) / 2;
    const cxd up = p.omega * std::exp(iu(p.delta * t));
    for (int n = 0; n < dim; ++n) {
        out(n) = iu(-1.0) * std::conj(up) * y(dim + n);
        out(dim + n) = iu(-1.0) * (p.chi * n * y(dim + n) + up * y(n));
    }
}

std::vector<VectorXcd> rk4_run(const PulseParams& p, const VectorXcd& initial,
                               const std::vector<double>& t_grid, double h) {
    std::vector<VectorXcd> out;
    out.reserve(t_grid.size());
    VectorXcd y = initial, k1 = y, k2 = y, k3 = y, k4 = y, tmp = y;
    double t = 0.0;
    for (double tg : t_grid) {
        const double span = tg - t;
        const int m = span > 0.0 ? static_cast<int>(std::ceil(span / h)) : 0;
        const double hs = m > 0 ? span / m : 0.0;
        for (int s = 0; s < m; ++s) {
            generator_apply(p, t, y, k1);
            tmp = y + (hs / 2.0) * k1;
            generator_apply(p, t + hs / 2.0, tmp, k2);
            tmp = y + (hs / 2.0) * k2;
            generator_apply(p, t + hs / 2.0, tmp, k3);
            tmp = y + hs * k3;
            generator_apply(p, t + hs, tmp, k4);
            y += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += hs;
        }
        t = tg;
        out.push_back(y);
    }
    return out;
}

} // namespace

PulseParams pulse_for_phase(double phi, double omega, double chi) {
    if (!(std::abs(phi) < 2.0 * M_PI) || !std::isfinite(phi))
        throw DomainError("pulse_for_phase: phi must lie in (-2pi, 2pi)");
    if (chi == 0.0) throw DomainError("pulse_for_phase: chi must be nonzero");
    PulseParams p;
    p.chi = chi;
    p.omega = omega;
    p.phi = phi;
    if (phi == 0.0) {
        p.delta = 0.0;
        p.eps = omega;
        p.tau = 0.0;
    } else {
        if (omega <= 0.0) throw DomainError("pulse_for_phase: omega must be positive");
        p.delta = phi > 0.0
                      ? 2.0 * omega * (M_PI - phi) / std::sqrt(phi * (2.0 * M_PI - phi))
                      : -2.0 * omega * (M_PI + phi) / std::sqrt(-phi * (2.0 * M_PI + phi));
        p.eps = std::sqrt(omega * omega + p.delta * p.delta / 4.0);
        p.tau = M_PI / p.eps;
    }
    p.regime_ratio = std::max(std::abs(p.delta), omega) / std::abs(chi);
    p.regime_warning = p.regime_ratio > 0.3;
    return p;
}

QubitOscState vacuum_evolution_closed_form(const PulseParams& p, double t, int dim) {
    QubitOscState st;
    st.dim = dim;
    st.amps = VectorXcd::Zero(2 * dim);
    const double s = p.eps == 0.0 ? t : std::sin(p.eps * t) / p.eps;
    const double c = std::cos(p.eps * t);
    st.amps(0) = std::exp(iu(-p.delta * t / 2.0)) * (c + iu(p.delta / 2.0) * s);
    st.amps(dim) = std::exp(iu(p.delta * t / 2.0)) * iu(-p.omega) * s;
    return st;
}

std::vector<QubitOscState> propagate(const PulseParams& p, const QubitOscState& initial,
                                     const std::vector<double>& t_grid, PropagationMethod method) {
    if (initial.amps.size() != Eigen::Index(2) * initial.dim)
        throw DimensionError("propagate: state length must be 2*dim");
    for (size_t i = 0; i < t_grid.size(); ++i)
        if (t_grid[i] < 0.0 || (i > 0 && t_grid[i] < t_grid[i - 1]))
            throw DomainError("propagate: time grid must be ascending and nonnegative");

    std::vector<QubitOscState> out(t_grid.size());
    if (method == PropagationMethod::StaticFrame) {
        for (size_t i = 0; i < t_grid.size(); ++i) {
            out[i].dim = initial.dim;
            out[i].amps.resize(initial.amps.size());
            static_frame_apply(p, initial.amps, t_grid[i], out[i].amps);
        }
        return out;
    }

    // fixed-step RK4 with Richardson halving until the endpoint stabilizes
    const double base = 2.0 * M_PI / (200.0 * std::abs(p.chi));
    double h = p.tau > 0.0 ? std::min(base, p.tau / 2000.0) : base;
    std::vector<VectorXcd> coarse = rk4_run(p, initial.amps, t_grid, h);
    for (int halving = 0;; ++halving) {
        if (halving >= 12)
            throw StepSizeError("propagate: RK4 failed to converge within the halving cap");
        std::vector<VectorXcd> fine = rk4_run(p, initial.amps, t_grid, h / 2.0);
        const double gap = t_grid.empty() ? 0.0 : (fine.back() - coarse.back()).norm();
        if (gap <= 1e-9) {
            for (size_t i = 0; i < t_grid.size(); ++i) out[i] = {std::move(fine[i]), initial.dim};
            return out;
        }
        coarse = std::move(fine);
        h /= 2.0;
    }
}

std::vector<std::pair<double, double>> fidelity_curve(const PulseParams& p, cxd alpha,
                                                      int n_points) {
    if (n_points < 2) throw DomainError("fidelity_curve: need at least 2 points");
    if (p.tau <= 0.0) throw DomainError("fidelity_curve: pulse has zero duration");
    const int dim = default_dim(2.0 * std::abs(alpha));
    QubitOscState init;
    init.dim = dim;
    init.amps = VectorXcd::Zero(2 * dim);
    init.amps.head(dim) = coherent_state(FockSpace(dim), 2.0 * alpha);

    std::vector<double> ts(n_points);
    for (int i = 0; i < n_points; ++i) ts[i] = p.tau * i / double(n_points - 1);
    const auto states = propagate(p, init, ts);
    std::vector<std::pair<double, double>> curve(n_points);
    for (int i = 0; i < n_points; ++i)
        curve[i] = {ts[i], std::norm(init.amps.dot(states[i].amps))};
    return curve;
}

double revival_period(const std::vector<std::pair<double, double>>& curve, double chi) {
    const int n = static_cast<int>(curve.size());
    if (n < 16) throw DomainError("revival_period: curve too short");
    const double dt = curve[1].first - curve[0].first;
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = 1.0 - curve[i].second;
    d.array() -= d.mean();
    const int guard = std::max(1, static_cast<int>(std::ceil(1.5 / (std::abs(chi) * dt))));
    const int hi = static_cast<int>(0.85 * n);
    if (guard >= hi) throw DomainError("revival_period: curve shorter than the guard window");
    int best = guard;
    double best_val = -1e300;
    for (int lag = guard; lag < hi; ++lag) {
        double acc = 0.0;
        for (int i = 0; i + lag < n; ++i) acc += d(i) * d(i + lag);
        acc /= double(n - lag);
        if (acc > best_val) {
            best_val = acc;
            best = lag;
        }
    }
    return best * dt;
}

double phase_gate_error(const PulseParams& p, cxd alpha) {
    const int dim = default_dim(2.0 * std::abs(alpha));
    QubitOscState init;
    init.dim = dim;
    init.amps = VectorXcd::Zero(2 * dim);
    const VectorXcd c = coherent_state(FockSpace(dim), 2.0 * alpha);
    init.amps.head(dim) = c;
    const auto fin = propagate(p, init, {p.tau});
    VectorXcd target = c;
    target(0) *= std::exp(iu(p.phi));
    return 1.0 - std::norm(target.dot(fin[0].amps.head(dim)));
}

} // namespace catbell
