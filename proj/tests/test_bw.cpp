#include <doctest.h>

#include <random>

#include "catbell/bw.hpp"
#include "catbell/neldermead.hpp"

using namespace catbell;

namespace {

constexpr double kTwoSqrt2 = 2.0 * M_SQRT2;

double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

cxd rndc(std::mt19937_64& rng, double max_abs) {
    const double mag = max_abs * u01(rng), ph = 2.0 * M_PI * u01(rng);
    return cxd(mag * std::cos(ph), mag * std::sin(ph));
}

} // namespace

TEST_CASE("displaced parity element: limits") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 10; ++k) {
        const cxd bra = rndc(rng, 2.0), ket = rndc(rng, 2.0);
        // beta = 0 reduces to <bra|P|ket> = <bra|-ket>
        const cxd direct = std::exp(cxd(-(std::norm(bra) + std::norm(ket)) / 2.0, 0.0) +
                                    std::conj(bra) * (-ket));
        CHECK(std::abs(displaced_parity_element(bra, cxd(0.0), ket) - direct) < 1e-14);
        // diagonal element is real: <g|D P D^+|g> = e^{-2|g - beta|^2}
        const cxd beta = rndc(rng, 2.0);
        const cxd diag = displaced_parity_element(bra, beta, bra);
        CHECK(std::abs(diag.imag()) < 1e-14);
        CHECK(diag.real() == doctest::Approx(std::exp(-2.0 * std::norm(bra - beta))).epsilon(1e-12));
    }
}

TEST_CASE("correlation oracle equals the truncated-operator path") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 100; ++k) {
        const EcsSpec spec{rndc(rng, 2.0), rndc(rng, 2.0), 2.0 * M_PI * u01(rng)};
        const cxd b1 = rndc(rng, 2.0), b2 = rndc(rng, 2.0);
        const double oracle = bw_correlation_oracle(spec, b1, b2);
        CHECK(std::abs(bw_correlation(spec, b1, b2) - oracle) <= 1e-8);
        CHECK(std::abs(oracle) <= 1.0 + 1e-9);
    }
}

TEST_CASE("zero displacement reduces to the unrotated parity correlation") {
    for (double a : {0.3, 0.9, 1.6}) {
        for (double theta : {0.0, 0.8}) {
            const EcsSpec spec{a, 0.8 * a, theta};
            // P = P_z(phi = 0), so the two modules must agree identically
            CHECK(std::abs(bw_correlation_oracle(spec, cxd(0.0), cxd(0.0)) -
                           correlation_analytic(spec, 0.0, 0.0)) < 1e-13);
        }
    }
}

TEST_CASE("signal bound and truncation guard") {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 50; ++k) {
        const EcsSpec spec{rndc(rng, 2.2), rndc(rng, 2.2), 2.0 * M_PI * u01(rng)};
        const DisplacementSettings s{rndc(rng, 2.0), rndc(rng, 2.0), rndc(rng, 2.0),
                                     rndc(rng, 2.0)};
        CHECK(bell_signal_bw(spec, s) <= kTwoSqrt2 + 1e-9);
    }
    CHECK_THROWS_AS(bw_correlation(EcsSpec{2.0, 2.0, 0.0}, cxd(1.0), cxd(1.0), 8),
                    TruncationError);
}

TEST_CASE("optimizer: pinned optima") {
    const auto at3 = optimize_bw(EcsSpec{3.0, 3.0, 0.0}, 16);
    CHECK(at3.best_signal == doctest::Approx(2.7712920).epsilon(5e-5));
    const auto at11 = optimize_bw(EcsSpec{1.1, 1.1, 0.0}, 16);
    CHECK(at11.best_signal == doctest::Approx(2.5153780).epsilon(5e-5));
    // optimum sits at purely imaginary displacements (Re beta ~ 0)
    CHECK(std::abs(at11.best_settings.b1.real()) < 1e-3);
    CHECK(std::abs(at11.best_settings.b2p.real()) < 1e-3);
    // settings re-evaluated on the operator path give the same signal
    const DisplacementSettings& s = at11.best_settings;
    const EcsSpec spec{1.1, 1.1, 0.0};
    const double opsig = std::abs(bw_correlation(spec, s.b1, s.b2) +
                                  bw_correlation(spec, s.b1, s.b2p) +
                                  bw_correlation(spec, s.b1p, s.b2) -
                                  bw_correlation(spec, s.b1p, s.b2p));
    CHECK(std::abs(opsig - at11.best_signal) <= 1e-8);
}

TEST_CASE("optimizer: zero-amplitude state caps at the classical bound") {
    const auto res = optimize_bw(EcsSpec{0.0, 0.0, 0.0}, 4);
    CHECK(res.best_signal == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("optimizer: deterministic and monotone in the restart budget") {
    const EcsSpec spec{1.1, 1.1, 0.0};
    const auto a = optimize_bw(spec, 6, 42);
    const auto b = optimize_bw(spec, 6, 42);
    CHECK(a.best_signal == b.best_signal); // bitwise
    CHECK(a.best_settings.b1 == b.best_settings.b1);
    CHECK(a.best_settings.b2p == b.best_settings.b2p);

    const double v4 = optimize_bw(spec, 4).best_signal;
    const double v8 = optimize_bw(spec, 8).best_signal;
    const double v16 = optimize_bw(spec, 16).best_signal;
    CHECK(v4 <= v8 + 1e-15);
    CHECK(v8 <= v16 + 1e-15);

    // a parallel run must reproduce the serial winner bitwise
    const auto par = optimize_bw(spec, 6, 42, 3);
    CHECK(par.best_signal == a.best_signal);
}

TEST_CASE("nelder-mead: quadratic, Rosenbrock, box clamp") {
    const auto quad = [](const Eigen::VectorXd& x) {
        return (x(0) - 1.0) * (x(0) - 1.0) + 4.0 * (x(1) + 2.0) * (x(1) + 2.0);
    };
    std::vector<Eigen::VectorXd> sq{Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.5, 0.5),
                                    Eigen::Vector2d(-0.5, 1.0)};
    const Eigen::VectorXd lo = Eigen::Vector2d(-5.0, -5.0), hi = Eigen::Vector2d(5.0, 5.0);
    const NmResult r1 = nelder_mead(quad, sq, lo, hi, 1e-12, 2000);
    CHECK(r1.converged);
    CHECK(std::abs(r1.x(0) - 1.0) < 1e-5);
    CHECK(std::abs(r1.x(1) + 2.0) < 1e-5);
    CHECK(r1.value < 1e-9);

    const auto rosen = [](const Eigen::VectorXd& x) {
        const double a = 1.0 - x(0), b = x(1) - x(0) * x(0);
        return a * a + 100.0 * b * b;
    };
    std::vector<Eigen::VectorXd> sr{Eigen::Vector2d(-1.2, 1.0), Eigen::Vector2d(-0.9, 1.1),
                                    Eigen::Vector2d(-1.1, 0.7)};
    const NmResult r2 = nelder_mead(rosen, sr, lo, hi, 1e-14, 5000);
    CHECK(r2.value < 1e-8);
    CHECK(std::abs(r2.x(0) - 1.0) < 1e-3);

    const auto line = [](const Eigen::VectorXd& x) { return x(0); };
    std::vector<Eigen::VectorXd> sl{Eigen::VectorXd::Constant(1, 1.0),
                                    Eigen::VectorXd::Constant(1, 2.0)};
    const NmResult r3 = nelder_mead(line, sl, Eigen::VectorXd::Constant(1, 0.5),
                                    Eigen::VectorXd::Constant(1, 4.0), 1e-12, 500);
    CHECK(r3.x(0) == doctest::Approx(0.5).epsilon(1e-9));
}
