#include "catbell/fock.hpp"

#include <cmath>
#include <string>

namespace catbell {

double coherent_tail(double amp, int dim) {
    const double lambda = amp * amp;
    if (lambda == 0.0) return 0.0;
    // sum the Poisson tail upward from n = dim; first term via logs to avoid
    // overflow of lambda^n / n!
    double term = std::exp(-lambda + dim * std::log(lambda) - std::lgamma(dim + 1.0));
    double acc = 0.0;
    for (int n = dim; n < dim + 100000; ++n) {
        acc += term;
        term *= lambda / (n + 1);
        if (term < 1e-30 && term < 1e-16 * acc) break;
    }
    return acc;
}

int required_dim(double amp) {
    int d = std::max(1, static_cast<int>(amp * amp));
    while (coherent_tail(amp, d) > kTailBound) ++d;
    return d;
}

int default_dim(double amp) {
    const double a = std::abs(amp);
    return static_cast<int>(std::ceil(a * a + 10.0 * a + 20.0));
}

void check_truncation(const FockSpace& space, double amp) {
    if (coherent_tail(amp, space.dim) > kTailBound)
        throw TruncationError("truncation criterion fails for amplitude " + std::to_string(amp) +
                                  " at dim " + std::to_string(space.dim),
                              required_dim(amp));
}

VectorXcd coherent_state(const FockSpace& space, cxd alpha) {
    check_truncation(space, std::abs(alpha));
    VectorXcd c(space.dim);
    c(0) = std::exp(-std::norm(alpha) / 2.0);
    for (int n = 1; n < space.dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(double(n));
    return c / c.norm();
}

MatrixXcd displacement_operator(const FockSpace& space, cxd alpha) {
    // the amplitude must clear the criterion below the unitarity buffer, so
    // the corrupted top edge stays out of any state this operator produces
    check_truncation(FockSpace(std::max(1, space.dim - kUnitarityBuffer)), std::abs(alpha));
    const int d = space.dim;
    MatrixXcd D(d, d);
    // column 0 is the unnormalized coherent vector <m|D|0> = e^{-|a|^2/2} a^m/sqrt(m!)
    D(0, 0) = std::exp(-std::norm(alpha) / 2.0);
    for (int m = 1; m < d; ++m) D(m, 0) = D(m - 1, 0) * alpha / std::sqrt(double(m));
    // remaining columns from D a^+ = (a^+ - conj(a)) D applied elementwise:
    // sqrt(n+1) <m|D|n+1> = sqrt(m) <m-1|D|n> - conj(a) <m|D|n>
    const cxd ac = std::conj(alpha);
    for (int n = 0; n + 1 < d; ++n) {
        const double rn = 1.0 / std::sqrt(double(n + 1));
        D(0, n + 1) = -ac * D(0, n) * rn;
        for (int m = 1; m < d; ++m)
            D(m, n + 1) = (std::sqrt(double(m)) * D(m - 1, n) - ac * D(m, n)) * rn;
    }
    return D;
}

MatrixXcd parity_operator(const FockSpace& space) {
    MatrixXcd P = MatrixXcd::Zero(space.dim, space.dim);
    for (int n = 0; n < space.dim; ++n) P(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    return P;
}

MatrixXcd phase_gate(const FockSpace& space, double phi) {
    MatrixXcd G = MatrixXcd::Identity(space.dim, space.dim);
    G(0, 0) = std::exp(cxd(0.0, phi));
    return G;
}

MatrixXcd rotation_z(const FockSpace& space, cxd alpha, double phi) {
    MatrixXcd D = displacement_operator(space, alpha);
    MatrixXcd GD = D;
    GD.row(0) *= std::exp(cxd(0.0, phi)); // G(phi) D(alpha): G only scales row 0
    return D.adjoint() * GD;
}

VectorXcd tensor(const VectorXcd& a, const VectorXcd& b) {
    if (double(a.size()) * double(b.size()) > 4e8)
        throw DimensionError("tensor product too large");
    VectorXcd out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

MatrixXcd tensor(const MatrixXcd& a, const MatrixXcd& b) {
    if (double(a.rows()) * double(b.rows()) > 2e4)
        throw DimensionError("tensor product too large");
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

cxd expectation(const VectorXcd& state, const MatrixXcd& op) {
    if (op.rows() != state.size() || op.cols() != state.size())
        throw DimensionError("expectation: operator/state dimension mismatch");
    return state.dot(op * state);
}

VectorXcd apply_mode1(const MatrixXcd& op, const VectorXcd& state, int d1, int d2) {
    if (op.rows() != d1 || op.cols() != d1 || state.size() != Eigen::Index(d1) * d2)
        throw DimensionError("apply_mode1: dimension mismatch");
    // column-major view M(i2, i1) = state[i1*d2 + i2]; mode-1 action is M op^T
    Eigen::Map<const MatrixXcd> M(state.data(), d2, d1);
    VectorXcd out(state.size());
    Eigen::Map<MatrixXcd>(out.data(), d2, d1) = M * op.transpose();
    return out;
}

VectorXcd apply_mode2(const MatrixXcd& op, const VectorXcd& state, int d1, int d2) {
    if (op.rows() != d2 || op.cols() != d2 || state.size() != Eigen::Index(d1) * d2)
        throw DimensionError("apply_mode2: dimension mismatch");
    Eigen::Map<const MatrixXcd> M(state.data(), d2, d1);
    VectorXcd out(state.size());
    Eigen::Map<MatrixXcd>(out.data(), d2, d1) = op * M;
    return out;
}

MatrixXcd partial_trace(const VectorXcd& state, int d1, int d2, int keep) {
    if (state.size() != Eigen::Index(d1) * d2)
        throw DimensionError("partial_trace: dimension mismatch");
    Eigen::Map<const MatrixXcd> M(state.data(), d2, d1);
    if (keep == 2) return M * M.adjoint();
    if (keep == 1) return (M.adjoint() * M).transpose();
    throw DimensionError("partial_trace: keep must be 1 or 2");
}

double unitarity_defect(const MatrixXcd& op, int buffer) {
    const int d = static_cast<int>(op.rows());
    const int db = std::max(1, d - buffer);
    MatrixXcd E = op.adjoint() * op - MatrixXcd::Identity(d, d);
    return E.block(0, 0, db, db).cwiseAbs().maxCoeff();
}

double hermiticity_defect(const MatrixXcd& op) {
    return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace catbell
