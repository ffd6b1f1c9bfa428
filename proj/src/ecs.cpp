#include "catbell/ecs.hpp"

#include <cmath>

namespace catbell {

namespace {

// off-diagonal rotated-parity kernel <-a|P_z(phi)|a> * e^{2|a|^2} companion;
// enters the coherence (theta) term of the correlation
cxd parity_kernel_cross(double s, double phi) {
    const cxd e = std::exp(cxd(0.0, -phi));
    return e + std::exp(-4.0 * s) * (1.0 - e);
}

int mode_dim(cxd alpha, int dim_override, double reach_factor) {
    return dim_override > 0 ? dim_override : default_dim(reach_factor * std::abs(alpha));
}

} // namespace

double EcsSpec::norm_factor() const {
    const double s = std::norm(alpha1) + std::norm(alpha2);
    const double n2 = 2.0 + 2.0 * std::cos(theta) * std::exp(-2.0 * s);
    if (n2 < 1e-12)
        throw DegenerateStateError("ECS norm vanishes (theta = pi with both amplitudes ~ 0)");
    return 1.0 / std::sqrt(n2);
}

VectorXcd build_ecs(const EcsSpec& spec, const FockSpace& s1, const FockSpace& s2) {
    spec.norm_factor(); // reject the degenerate definition up front
    const cxd phase = std::exp(cxd(0.0, spec.theta));
    VectorXcd v = tensor(coherent_state(s1, spec.alpha1), coherent_state(s2, spec.alpha2)) +
                  phase * tensor(coherent_state(s1, -spec.alpha1), coherent_state(s2, -spec.alpha2));
    const double n = v.norm();
    if (n < 1e-8) throw DegenerateStateError("ECS construction cancelled to numerical zero");
    return v / n;
}

MatrixXcd rotated_parity(const FockSpace& space, cxd alpha, double phi) {
    MatrixXcd R = rotation_z(space, alpha, phi);
    return R * parity_operator(space) * R.adjoint();
}

double parity_kernel_diag(double s, double phi) {
    const double c = std::cos(phi);
    return std::exp(-2.0 * s) * (2.0 * c - 1.0) + 2.0 * std::exp(-6.0 * s) * (1.0 - c);
}

double correlation_analytic(const EcsSpec& spec, double phi1, double phi2) {
    const double s1 = std::norm(spec.alpha1), s2 = std::norm(spec.alpha2);
    const double n = spec.norm_factor();
    const cxd coh = std::exp(cxd(0.0, spec.theta)) *
                    parity_kernel_cross(s1, phi1) * parity_kernel_cross(s2, phi2);
    return n * n *
           (std::exp(-2.0 * (s1 + s2)) +
            parity_kernel_diag(s1, phi1) * parity_kernel_diag(s2, phi2) + 2.0 * coh.real());
}

CorrelationReport correlation_numeric(const EcsSpec& spec, double phi1, double phi2,
                                      int dim_override) {
    // rotations reach amplitudes 2|a_j|, so the truncation rule uses that
    const int d1 = mode_dim(spec.alpha1, dim_override, 2.0);
    const int d2 = mode_dim(spec.alpha2, dim_override, 2.0);
    const FockSpace f1(d1), f2(d2);
    check_truncation(FockSpace(std::max(1, d1 - kUnitarityBuffer)), 2.0 * std::abs(spec.alpha1));
    check_truncation(FockSpace(std::max(1, d2 - kUnitarityBuffer)), 2.0 * std::abs(spec.alpha2));
    const VectorXcd psi = build_ecs(spec, f1, f2);

    double value;
    if (std::max(d1, d2) <= 48) {
        const MatrixXcd pz1 = rotated_parity(f1, spec.alpha1, phi1);
        const MatrixXcd pz2 = rotated_parity(f2, spec.alpha2, phi2);
        value = psi.dot(apply_mode2(pz2, apply_mode1(pz1, psi, d1, d2), d1, d2)).real();
    } else {
        // apply R^+ = D^+ G^+ D factor-wise to the ket, then read the parity
        // quadratic form; avoids the O(d^3) operator products on sweeps
        VectorXcd chi = apply_mode1(displacement_operator(f1, spec.alpha1), psi, d1, d2);
        chi.segment(0, d2) *= std::exp(cxd(0.0, -phi1)); // G^+ acts on the i1 = 0 slice
        chi = apply_mode1(displacement_operator(f1, spec.alpha1).adjoint(), chi, d1, d2);
        chi = apply_mode2(displacement_operator(f2, spec.alpha2), chi, d1, d2);
        for (int i1 = 0; i1 < d1; ++i1) chi(Eigen::Index(i1) * d2) *= std::exp(cxd(0.0, -phi2));
        chi = apply_mode2(displacement_operator(f2, spec.alpha2).adjoint(), chi, d1, d2);
        double e = 0.0;
        for (int i1 = 0; i1 < d1; ++i1)
            for (int i2 = 0; i2 < d2; ++i2)
                e += (((i1 + i2) % 2 == 0) ? 1.0 : -1.0) * std::norm(chi(Eigen::Index(i1) * d2 + i2));
        value = e;
    }

    const double analytic = correlation_analytic(spec, phi1, phi2);
    return CorrelationReport{value, analytic, std::abs(value - analytic), std::max(d1, d2)};
}

AngleSettings canonical_angles(double theta) {
    return AngleSettings{theta, M_PI / 4.0, theta - M_PI / 2.0, -M_PI / 4.0};
}

double bell_signal_rp(const EcsSpec& spec, const AngleSettings& a) {
    return std::abs(correlation_analytic(spec, a.phi1, a.phi2) +
                    correlation_analytic(spec, a.phi1, a.phi2p) +
                    correlation_analytic(spec, a.phi1p, a.phi2) -
                    correlation_analytic(spec, a.phi1p, a.phi2p));
}

double bell_signal_rp_numeric(const EcsSpec& spec, const AngleSettings& a, int dim_override) {
    return std::abs(correlation_numeric(spec, a.phi1, a.phi2, dim_override).value_numeric +
                    correlation_numeric(spec, a.phi1, a.phi2p, dim_override).value_numeric +
                    correlation_numeric(spec, a.phi1p, a.phi2, dim_override).value_numeric -
                    correlation_numeric(spec, a.phi1p, a.phi2p, dim_override).value_numeric);
}

double concurrence(const EcsSpec& spec) {
    const double n = spec.norm_factor();
    const double p1 = 1.0 - std::exp(-4.0 * std::norm(spec.alpha1));
    const double p2 = 1.0 - std::exp(-4.0 * std::norm(spec.alpha2));
    return 2.0 * n * n * std::sqrt(p1 * p2);
}

double single_mode_parity(const EcsSpec& spec, int mode, int dim_override) {
    const int d1 = mode_dim(spec.alpha1, dim_override, 1.0);
    const int d2 = mode_dim(spec.alpha2, dim_override, 1.0);
    const VectorXcd psi = build_ecs(spec, FockSpace(d1), FockSpace(d2));
    const MatrixXcd rho = partial_trace(psi, d1, d2, mode);
    double p = 0.0;
    for (int n = 0; n < rho.rows(); ++n) p += ((n % 2 == 0) ? 1.0 : -1.0) * rho(n, n).real();
    return p;
}

double correlation_mixture(const EcsSpec& spec, double phi1, double phi2) {
    // |a1,a2> carries the full diagonal kernel; |-a1,-a2> is a fixed point of
    // both rotations (up to phase), so its factor is the bare parity e^{-2s}
    const double s1 = std::norm(spec.alpha1), s2 = std::norm(spec.alpha2);
    return 0.5 * (parity_kernel_diag(s1, phi1) * parity_kernel_diag(s2, phi2) +
                  std::exp(-2.0 * (s1 + s2)));
}

} // namespace catbell
