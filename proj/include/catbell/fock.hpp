#pragma once

#include <Eigen/Dense>
#include <complex>

#include "catbell/errors.hpp"

// Truncated-Fock-space linear algebra: states, operators, composition,
// expectation values and partial trace, with explicit truncation-error control.
//
// Conventions used throughout the library:
//   * a single-mode state is an Eigen::VectorXcd of length dim over |0..dim-1>;
//   * a two-mode state is a VectorXcd of length d1*d2 with mode 1 as the slow
//     index: amps[i1*d2 + i2] = <i1, i2|psi>;
//   * operators are dense Eigen::MatrixXcd on the same basis.

namespace catbell {

using cxd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Poisson mass allowed beyond the top retained level for any coherent
// amplitude admitted into a space.
inline constexpr double kTailBound = 1e-12;

// top levels excluded from unitarity checks (truncated generators corrupt
// only the upper edge of an operator)
inline constexpr int kUnitarityBuffer = 5;

struct FockSpace {
    int dim;
    explicit FockSpace(int d) : dim(d) {
        if (d < 1) throw DimensionError("FockSpace dim must be >= 1");
    }
};

// Poisson(|amp|^2) mass above levels 0..dim-1, i.e. 1 - sum_{n<dim} e^-A^2 A^2n/n!
double coherent_tail(double amp, int dim);

// smallest dim whose tail satisfies kTailBound for this amplitude
int required_dim(double amp);

// default working dimension when the largest reachable coherent amplitude is
// `amp`: ceil(A^2 + 10A + 20) keeps the Poisson tail below 1e-12 with margin
int default_dim(double amp);

// throws TruncationError (with the dim that would suffice) unless
// coherent_tail(amp, dim) <= kTailBound
void check_truncation(const FockSpace& space, double amp);

// |alpha>: amps[n] = e^{-|a|^2/2} a^n / sqrt(n!), renormalized on the
// truncated basis (the correction is <= the tail bound by construction)
VectorXcd coherent_state(const FockSpace& space, cxd alpha);

// D(alpha) = exp(alpha a^+ - alpha^* a) with exact matrix elements from the
// stable two-term column recurrence (associated-Laguerre form)
MatrixXcd displacement_operator(const FockSpace& space, cxd alpha);

// P = (-1)^n, diagonal, exact in the truncated space
MatrixXcd parity_operator(const FockSpace& space);

// G(phi): e^{i phi} on |0>, identity on |n>, n >= 1
MatrixXcd phase_gate(const FockSpace& space, double phi);

// R_z(phi) = D^+(alpha) G(phi) D(alpha)
MatrixXcd rotation_z(const FockSpace& space, cxd alpha, double phi);

// Kronecker composition, mode 1 slow / mode 2 fast
VectorXcd tensor(const VectorXcd& a, const VectorXcd& b);
MatrixXcd tensor(const MatrixXcd& a, const MatrixXcd& b);

// <state|op|state>
cxd expectation(const VectorXcd& state, const MatrixXcd& op);

// apply a single-mode operator to one factor of a two-mode state without
// materializing the d1*d2-dimensional product operator
VectorXcd apply_mode1(const MatrixXcd& op, const VectorXcd& state, int d1, int d2);
VectorXcd apply_mode2(const MatrixXcd& op, const VectorXcd& state, int d1, int d2);

// reduced density matrix of one mode (keep = 1 or 2) of a two-mode pure state
MatrixXcd partial_trace(const VectorXcd& state, int d1, int d2, int keep);

// max-norm of U^+U - I restricted to rows/columns below dim - buffer; the
// unitarity figure quoted in operator contracts
double unitarity_defect(const MatrixXcd& op, int buffer = kUnitarityBuffer);

// max-norm of H - H^+
double hermiticity_defect(const MatrixXcd& op);

} // namespace catbell
