#include "catbell/bw.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "catbell/neldermead.hpp"

namespace catbell {

namespace {

// phase picked up when D(b) hits |g>: D(b)|g> = dphase(b,g) |b+g>
cxd dphase(cxd b, cxd g) { return std::exp((b * std::conj(g) - std::conj(b) * g) / 2.0); }

// coherent overlap <u|v>
cxd coverlap(cxd u, cxd v) {
    return std::exp(cxd(-(std::norm(u) + std::norm(v)) / 2.0, 0.0) + std::conj(u) * v);
}

DisplacementSettings unpack(const Eigen::VectorXd& x) {
    return DisplacementSettings{cxd(x(0), x(1)), cxd(x(2), x(3)), cxd(x(4), x(5)), cxd(x(6), x(7))};
}

// portable uniforms/permutations so a seed pins bytes on any platform
double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

std::vector<int> permutation(int n, std::mt19937_64& rng) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) {
        const int j = std::min(i, static_cast<int>(u01(rng) * (i + 1)));
        std::swap(p[i], p[j]);
    }
    return p;
}

// Latin-hypercube sample of `count` points in [-scale, scale]^dim
std::vector<Eigen::VectorXd> lhs_points(int count, int dim, double scale, std::mt19937_64& rng) {
    std::vector<std::vector<int>> perms(dim);
    for (int d = 0; d < dim; ++d) perms[d] = permutation(count, rng);
    std::vector<Eigen::VectorXd> pts(count, Eigen::VectorXd(dim));
    for (int k = 0; k < count; ++k)
        for (int d = 0; d < dim; ++d)
            pts[k](d) = scale * (2.0 * (perms[d][k] + u01(rng)) / count - 1.0);
    return pts;
}

struct RestartOutcome {
    double value = -1.0;
    Eigen::VectorXd x;
    bool converged = false;
};

} // namespace

cxd displaced_parity_element(cxd bra, cxd beta, cxd ket) {
    // D^+(b)|g> = dphase(-b, g) |g - b|>, P|v> = |-v>, then the bra side
    const cxd u = bra - beta, v = ket - beta;
    return std::conj(dphase(-beta, bra)) * dphase(-beta, ket) * coverlap(u, -v);
}

double bw_correlation_oracle(const EcsSpec& spec, cxd beta1, cxd beta2) {
    const double n = spec.norm_factor();
    const cxd c[2] = {cxd(1.0, 0.0), std::exp(cxd(0.0, spec.theta))}; // weights of |+a>, |-a>
    cxd acc = 0.0;
    for (int sb = 0; sb < 2; ++sb) {
        for (int sk = 0; sk < 2; ++sk) {
            const double fb = sb == 0 ? 1.0 : -1.0, fk = sk == 0 ? 1.0 : -1.0;
            acc += std::conj(c[sb]) * c[sk] *
                   displaced_parity_element(fb * spec.alpha1, beta1, fk * spec.alpha1) *
                   displaced_parity_element(fb * spec.alpha2, beta2, fk * spec.alpha2);
        }
    }
    return (n * n * acc).real();
}

double bw_correlation(const EcsSpec& spec, cxd beta1, cxd beta2, int dim_override) {
    const int d1 = dim_override > 0 ? dim_override
                                    : default_dim(std::abs(spec.alpha1) + std::abs(beta1));
    const int d2 = dim_override > 0 ? dim_override
                                    : default_dim(std::abs(spec.alpha2) + std::abs(beta2));
    const FockSpace f1(d1), f2(d2);
    check_truncation(FockSpace(std::max(1, d1 - kUnitarityBuffer)),
                     std::abs(spec.alpha1) + std::abs(beta1));
    check_truncation(FockSpace(std::max(1, d2 - kUnitarityBuffer)),
                     std::abs(spec.alpha2) + std::abs(beta2));
    const VectorXcd psi = build_ecs(spec, f1, f2);
    const MatrixXcd dp1 = displacement_operator(f1, beta1);
    const MatrixXcd dp2 = displacement_operator(f2, beta2);
    const MatrixXcd pi1 = dp1 * parity_operator(f1) * dp1.adjoint();
    const MatrixXcd pi2 = dp2 * parity_operator(f2) * dp2.adjoint();
    return psi.dot(apply_mode2(pi2, apply_mode1(pi1, psi, d1, d2), d1, d2)).real();
}

double bell_signal_bw(const EcsSpec& spec, const DisplacementSettings& s) {
    return std::abs(bw_correlation_oracle(spec, s.b1, s.b2) +
                    bw_correlation_oracle(spec, s.b1, s.b2p) +
                    bw_correlation_oracle(spec, s.b1p, s.b2) -
                    bw_correlation_oracle(spec, s.b1p, s.b2p));
}

double bw_search_box(const EcsSpec& spec) {
    return 2.0 * std::max(std::abs(spec.alpha1), std::abs(spec.alpha2)) + 2.0;
}

OptimizationResult optimize_bw(const EcsSpec& spec, int restarts, std::uint64_t seed, int jobs) {
    if (restarts < 1) throw DomainError("optimize_bw: restart budget must be >= 1");
    constexpr int kDim = 8;
    constexpr double kFtol = 1e-9;
    constexpr int kIterCap = 5000;
    const double box = bw_search_box(spec);
    const Eigen::VectorXd lo = Eigen::VectorXd::Constant(kDim, -box);
    const Eigen::VectorXd hi = Eigen::VectorXd::Constant(kDim, box);
    const auto objective = [&spec](const Eigen::VectorXd& x) {
        return -bell_signal_bw(spec, unpack(x));
    };

    // each restart: LHS simplex at its nested scale, then a local polish from
    // that restart's own best point (keeps the budget monotone)
    const auto run_restart = [&](int r) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (std::uint64_t(r) + 1));
        const double scale = box * std::pow(0.25, r % 4);
        NmResult stage1 =
            nelder_mead(objective, lhs_points(kDim + 1, kDim, scale, rng), lo, hi, kFtol, kIterCap);
        std::vector<Eigen::VectorXd> local(kDim + 1, stage1.x);
        const double step = std::max(1e-3, 1e-4 * box);
        for (int d = 0; d < kDim; ++d) local[d + 1](d) += step;
        NmResult stage2 = nelder_mead(objective, std::move(local), lo, hi, kFtol, kIterCap);
        RestartOutcome out;
        if (stage2.value <= stage1.value) {
            out.value = -stage2.value;
            out.x = stage2.x;
        } else {
            out.value = -stage1.value;
            out.x = stage1.x;
        }
        out.converged = stage1.converged && stage2.converged;
        return out;
    };

    std::vector<RestartOutcome> outcomes(restarts);
    const int workers = std::max(1, std::min(jobs, restarts));
    if (workers == 1) {
        for (int r = 0; r < restarts; ++r) outcomes[r] = run_restart(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < restarts; r = next.fetch_add(1))
                    outcomes[r] = run_restart(r);
            });
        for (auto& t : pool) t.join();
    }

    // reduce in restart order so scheduling cannot change the winner
    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (outcomes[r].value > outcomes[best].value) best = r;

    OptimizationResult res;
    res.best_signal = outcomes[best].value;
    res.best_settings = unpack(outcomes[best].x);
    res.restarts_used = restarts;
    res.converged = outcomes[best].converged;
    return res;
}

} // namespace catbell
