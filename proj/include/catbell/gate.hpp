#pragma once

#include <utility>
#include <vector>

#include "catbell/fock.hpp"

// Dispersive qubit-oscillator pulse: H = chi n |e><e| + Omega (e^{i delta t}
// |e><g| + h.c.). A square pulse of duration tau = pi/eps with the detuning
// chosen below imprints e^{i phi} on the oscillator vacuum while returning
// the qubit to |g>. chi sets the time unit.
//
// Qubit-oscillator states are VectorXcd of length 2*dim, ground block first:
// amps[q*dim + n], q = 0 (|g>) or 1 (|e>).

namespace catbell {

struct PulseParams {
    double chi = 1.0;
    double omega = 0.0;
    double delta = 0.0;
    double tau = 0.0;
    double phi = 0.0;
    double eps = 0.0;          // sqrt(Omega^2 + delta^2/4); eps*tau = pi for phi != 0
    double regime_ratio = 0.0; // max(|delta|, Omega)/|chi|
    bool regime_warning = false; // ratio > 0.3: outside the dispersive regime proper
};

struct QubitOscState {
    VectorXcd amps;
    int dim = 0;
};

enum class PropagationMethod { StaticFrame, Rk4 };

// detuning branch for the requested phase: delta = 2 Omega (pi - phi)/
// sqrt(phi (2 pi - phi)) for phi > 0, the mirrored branch for phi < 0;
// phi = 0 returns the trivial tau = 0 pulse. DomainError outside (-2pi, 2pi).
PulseParams pulse_for_phase(double phi, double omega, double chi = 1.0);

// two-amplitude evolution of |g>|0>: exact closed form of the vacuum sector
QubitOscState vacuum_evolution_closed_form(const PulseParams& p, double t, int dim);

// Schrodinger evolution from `initial` evaluated at each grid time.
// StaticFrame removes the drive phase with U = e^{i delta t |e><e|}, leaving
// per-Fock-level 2x2 blocks [[0, Omega], [Omega, delta + chi n]] that are
// exponentiated in closed form (exact, the production path). Rk4 steps the
// time-dependent generator at h = min(2pi/(200 chi), tau/2000) with a
// Richardson check at h/2, halving until the endpoint agreement target is
// met (StepSizeError after 12 halvings).
std::vector<QubitOscState> propagate(const PulseParams& p, const QubitOscState& initial,
                                     const std::vector<double>& t_grid,
                                     PropagationMethod method = PropagationMethod::StaticFrame);

// F(t) = |<psi(0)|psi(t)>|^2 for the initial state |g>|2 alpha> on n_points
// uniform times spanning [0, tau]
std::vector<std::pair<double, double>> fidelity_curve(const PulseParams& p, cxd alpha,
                                                      int n_points);

// dominant recurrence time of the fidelity deviation 1 - F: the lag
// maximizing the unbiased autocorrelation of the mean-subtracted deviation
// (the spacing between the initial oscillation burst and its revival)
double revival_period(const std::vector<std::pair<double, double>>& curve, double chi);

// 1 - |<target|psi(tau)>|^2 with target = e^{i phi} c0 |g,0> +
// sum_{n>=1} c_n |g,n> for initial oscillator amplitudes c_n of |2 alpha>
double phase_gate_error(const PulseParams& p, cxd alpha);

} // namespace catbell
