#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

// Minimal deterministic Nelder-Mead with box projection: the artifact needs
// seeded Latin-hypercube initial simplices and bitwise-reproducible
// multi-start behavior, which is simpler to guarantee in ~100 lines than to
// coax out of an external minimizer.

namespace catbell {

struct NmResult {
    Eigen::VectorXd x;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

// standard reflect/expand/contract/shrink; candidates are clamped into
// [lo, hi] componentwise; stops when the simplex value spread falls below
// ftol or after max_iter iterations
NmResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                     std::vector<Eigen::VectorXd> simplex, const Eigen::VectorXd& lo,
                     const Eigen::VectorXd& hi, double ftol, int max_iter);

} // namespace catbell
