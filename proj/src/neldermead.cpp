#include "catbell/neldermead.hpp"

#include <algorithm>
#include <cmath>

namespace catbell {

namespace {

Eigen::VectorXd clamp_box(Eigen::VectorXd x, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = std::clamp(x(i), lo(i), hi(i));
    return x;
}

} // namespace

NmResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                     std::vector<Eigen::VectorXd> simplex, const Eigen::VectorXd& lo,
                     const Eigen::VectorXd& hi, double ftol, int max_iter) {
    const int n = static_cast<int>(simplex[0].size());
    std::vector<double> fv(simplex.size());
    for (size_t i = 0; i < simplex.size(); ++i) {
        simplex[i] = clamp_box(simplex[i], lo, hi);
        fv[i] = f(simplex[i]);
    }

    NmResult res;
    int it = 0;
    for (; it < max_iter; ++it) {
        // order: best first, worst last
        std::vector<int> ord(simplex.size());
        for (size_t i = 0; i < ord.size(); ++i) ord[i] = static_cast<int>(i);
        std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        std::vector<Eigen::VectorXd> sx(simplex.size());
        std::vector<double> sf(simplex.size());
        for (size_t i = 0; i < ord.size(); ++i) {
            sx[i] = simplex[ord[i]];
            sf[i] = fv[ord[i]];
        }
        simplex.swap(sx);
        fv.swap(sf);

        if (std::abs(fv.back() - fv.front()) <= ftol) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += simplex[i];
        centroid /= double(n);

        const Eigen::VectorXd xr = clamp_box(centroid + (centroid - simplex.back()), lo, hi);
        const double fr = f(xr);
        if (fr < fv.front()) {
            const Eigen::VectorXd xe = clamp_box(centroid + 2.0 * (centroid - simplex.back()), lo, hi);
            const double fe = f(xe);
            if (fe < fr) {
                simplex.back() = xe;
                fv.back() = fe;
            } else {
                simplex.back() = xr;
                fv.back() = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex.back() = xr;
            fv.back() = fr;
        } else {
            const Eigen::VectorXd base = (fr < fv.back()) ? xr : simplex.back();
            const Eigen::VectorXd xc = clamp_box(centroid + 0.5 * (base - centroid), lo, hi);
            const double fc = f(xc);
            if (fc < std::min(fr, fv.back())) {
                simplex.back() = xc;
                fv.back() = fc;
            } else {
                for (size_t i = 1; i < simplex.size(); ++i) {
                    simplex[i] = clamp_box(simplex.front() + 0.5 * (simplex[i] - simplex.front()), lo, hi);
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }

    size_t best = 0;
    for (size_t i = 1; i < simplex.size(); ++i)
        if (fv[i] < fv[best]) best = i;
    res.x = simplex[best];
    res.value = fv[best];
    res.iterations = it;
    return res;
}

} // namespace catbell
