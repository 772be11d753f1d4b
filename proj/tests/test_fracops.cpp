#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "confheat/fracops.hpp"
#include "confheat/kernels.hpp"
#include "confheat/special.hpp"

#include <cmath>

using namespace confheat;
using fracops::Domain;
using kernels::FracOrder;
using kernels::Sign;
using quad::QuadratureSpec;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

GroupPoint epoint(int m, int k) {
    GroupPoint g;
    g.z = Eigen::VectorXd::Zero(m);
    g.sigma = Eigen::VectorXd::Zero(k);
    return g;
}

GroupPoint h1point(double z0, double z1, double sigma) {
    GroupPoint g;
    g.z = Eigen::Vector2d(z0, z1);
    g.sigma = Eigen::VectorXd::Constant(1, sigma);
    return g;
}

QuadratureSpec spec_rel(double rel) {
    QuadratureSpec s;
    s.rel_tol = rel;
    s.abs_tol = 1e-15;
    return s;
}

} // namespace

TEST_CASE("balakrishnan on a constant trace vanishes") {
    const double v = fracops::balakrishnan_by_parts([](double) { return 3.7; }, 0.5);
    CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("finite-difference derivative is validated by the Gaussian's analytic t-derivative") {
    const int n = 2;
    const double r2 = 1.3;
    auto p = [&](double t) { return kernels::euclid_heat_kernel(n, r2, t); };
    for (double t : {0.05, 0.3, 1.0, 5.0}) {
        const double h = std::min(std::max(1e-4, 1e-3 * t), 0.5 * t);
        const double d1 = (p(t + h) - p(t - h)) / (2.0 * h);
        const double d2 = (p(t + 0.5 * h) - p(t - 0.5 * h)) / h;
        const double fd = (4.0 * d2 - d1) / 3.0;
        const double exact = p(t) * (-0.5 * n / t + r2 / (4.0 * t * t));
        CHECK(std::abs(fd - exact) / std::abs(exact) < 1e-9);
    }
}

TEST_CASE("semigroup on the Euclidean fundamental solution") {
    const auto dom = Domain::euclid(2);
    const FracOrder o(0.5);
    auto x0 = epoint(2, 0);
    const QuadratureSpec spec = spec_rel(1e-10);

    // t -> 0 recovers the fundamental solution value 1/(4 pi)
    const double near0 = fracops::semigroup_on_fundsol(dom, o, x0, 1.0, 1e-8, spec);
    CHECK(std::abs(near0 - 1.0 / (4.0 * kPi)) / (1.0 / (4.0 * kPi)) < 1e-6);

    // strictly decreasing in t at the origin
    double prev = near0;
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        const double v = fracops::semigroup_on_fundsol(dom, o, x0, 1.0, t, spec);
        CHECK(v < prev);
        prev = v;
    }

    // brute-force 2-D spatial convolution oracle at (x,y,t) = (0,1,0.5)
    const double via_chain = fracops::semigroup_on_fundsol(dom, o, x0, 1.0, 0.5, spec);
    auto conv = [&](std::span<const double> xp) {
        const double q = xp[0] * xp[0] + xp[1] * xp[1];
        const std::vector<double> xv{xp[0], xp[1]};
        return kernels::euclid_heat_kernel(2, q, 0.5) *
               kernels::euclid_fundsol(2, o, xv, 1.0);
    };
    auto env = [](double r) { return std::exp(-r * r / 2.0); };
    QuadratureSpec bspec = spec_rel(1e-8);
    const double via_conv = quad::integrate_box(conv, 2, env, bspec).value;
    CHECK(std::abs(via_chain - via_conv) / via_chain < 1e-3);
}

TEST_CASE("nongeometric fundamental solution on R^n equals the closed form") {
    const auto dom = Domain::euclid(3);
    const QuadratureSpec spec = spec_rel(1e-11);
    auto g = epoint(3, 0);
    g.z[0] = 0.6;
    const std::vector<double> xv{0.6, 0.0, 0.0};
    for (const Sign sgn : {Sign::plus, Sign::minus}) {
        const FracOrder o(0.4, sgn);
        const double a = fracops::nongeom_fundsol(dom, o, g, 0.9, spec);
        const double b = kernels::euclid_fundsol(3, o, xv, 0.9);
        CHECK(std::abs(a - b) / b < 1e-9);
    }
}

TEST_CASE("Euclidean fractional power: dimension-free identity and the exact anchor") {
    const auto dom = Domain::euclid(2);
    const QuadratureSpec spec = spec_rel(1e-8);
    auto x0 = epoint(2, 0);

    const double lhs = fracops::frac_power_on_fundsol(dom, 0.5, x0, 1.0, spec);
    const std::vector<double> xv{0.0, 0.0};
    const double rhs = std::pow(2.0 * kPi, 1.0) *
                       kernels::euclid_fundsol(2, FracOrder(0.5, Sign::minus), xv, 1.0);
    CHECK(std::abs(lhs - rhs) / rhs < 1e-7);

    // normalized to the power-function identity the right side is exactly 1
    const double normalized = 4.0 * std::pow(kPi, 1.5) / special::gamma_fn(0.5) * lhs;
    CHECK(std::abs(normalized - 1.0) < 1e-6);
}

TEST_CASE("H-type fractional power hits the exact 3/8 anchor") {
    const auto h1 = build_standard(StandardFamily::heisenberg, 1);
    const auto dom = Domain::htype(h1);
    const QuadratureSpec spec = spec_rel(1e-5);
    const double lhs = fracops::frac_power_on_fundsol(dom, 0.5, epoint(2, 1), 1.0, spec);
    CHECK(std::abs(lhs - 0.375) / 0.375 < 1e-4);
}

TEST_CASE("spectral convolution form: evenness in sigma and y=0 reduction") {
    const auto h1 = build_standard(StandardFamily::heisenberg, 1);
    const QuadratureSpec spec = spec_rel(1e-9);
    const auto gp = h1point(0.7, -0.1, 0.4);
    const auto gm = h1point(0.7, -0.1, -0.4);
    const double a = fracops::conv_lemma_spectral(h1, 0.5, gp, 0.3, 0.5, 0.6, false, spec);
    const double b = fracops::conv_lemma_spectral(h1, 0.5, gm, 0.3, 0.5, 0.6, false, spec);
    CHECK(a == b); // depends on |sigma| only

    // at y = 0 the last exponential factor is identically 1: compare against the
    // explicitly assembled y-free profile
    const double c = fracops::conv_lemma_spectral(h1, 0.5, gp, 0.0, 0.5, 0.6, false, spec);
    auto profile = [&](double lam) {
        using special::log_sinh_ratio;
        using special::x_coth;
        const double t = 0.5, tau = 0.6, s = 0.5;
        const double ut = 2.0 * kPi * t * lam, utau = 2.0 * kPi * tau * lam, uts = ut + utau;
        return std::exp(-(1.0 - s) * (std::log(4.0 * kPi * tau) + log_sinh_ratio(utau)) -
                        (1.0 + s) * (std::log(4.0 * kPi * t) + log_sinh_ratio(ut)) -
                        1.0 * (std::log(4.0 * kPi * (t + tau)) + log_sinh_ratio(uts)) -
                        0.5 * kPi * gp.z.squaredNorm() * x_coth(uts) / (2.0 * kPi * (t + tau)));
    };
    const double d = quad::radial_fourier(profile, 0.4, 1, spec).value;
    CHECK(std::abs(c - d) / std::abs(d) < 1e-10);
}

TEST_CASE("direct group convolution matches the spectral form (H^1 sample)") {
    const auto h1 = build_standard(StandardFamily::heisenberg, 1);
    const QuadratureSpec spec = spec_rel(1e-5);
    const auto e = epoint(2, 1);
    const double direct = fracops::conv_direct(h1, 0.5, e, 0.5, 0.5, 0.5, false, spec);
    const double spectral = fracops::conv_lemma_spectral(h1, 0.5, e, 0.5, 0.5, 0.5, false, spec_rel(1e-9));
    CHECK(direct > 0.0);
    CHECK(std::abs(direct - spectral) / spectral < 5e-3);
}

TEST_CASE("direct convolution: symmetry under inversion at y=0, t=tau") {
    const auto h1 = build_standard(StandardFamily::heisenberg, 1);
    const QuadratureSpec spec = spec_rel(1e-5);
    const auto g = h1point(0.8, 0.0, 0.15);
    const auto a = fracops::conv_direct(h1, 0.5, g, 0.0, 0.5, 0.5, false, spec);
    GroupPoint gi = group_inv(g);
    const auto b = fracops::conv_direct(h1, 0.5, gi, 0.0, 0.5, 0.5, false, spec);
    CHECK(std::abs(a - b) / std::abs(a) < 1e-6);
    CHECK(a > 0.0);
}

TEST_CASE("conformal operator: frozen anchor at the identity") {
    const auto h1 = build_standard(StandardFamily::heisenberg, 1);
    const QuadratureSpec spec = spec_rel(3e-6);
    const double lhs = fracops::conformal_apply(h1, 0.5, epoint(2, 1), 1.0, spec);
    // (2 pi) * e_(-1/2)(e,1) from the Gamma closed form
    const double rhs = 0.13283498748960546;
    CHECK(std::abs(lhs - rhs) / rhs < 1e-4);
}

TEST_CASE("conformal operator: by-parts route agrees with the difference route") {
    const auto h1 = build_standard(StandardFamily::heisenberg, 1);
    const double a = fracops::conformal_apply(h1, 0.5, epoint(2, 1), 1.0, spec_rel(3e-6));
    const double b = fracops::conformal_apply_by_parts(h1, 0.5, epoint(2, 1), 1.0, spec_rel(1e-5));
    CHECK(std::abs(a - b) / std::abs(a) < 1e-3);
}

TEST_CASE("riesz inverse undoes the conformal operator on the fundamental-solution family") {
    const auto h1 = build_standard(StandardFamily::heisenberg, 1);
    const QuadratureSpec spec = spec_rel(1e-5);
    const double s = 0.5, y = 1.0;
    const auto e = epoint(2, 1);
    const double coeff = std::pow(2.0 * kPi * y, 2.0 * s);
    const double inv = fracops::riesz_apply(h1, s, coeff, e, y, spec);
    const double expect = kernels::fundsol_closed(h1, FracOrder(s), e, y);
    CHECK(std::abs(inv - expect) / expect < 5e-3);

    // linearity: doubling the input scale doubles the output
    const double inv2 = fracops::riesz_apply(h1, s, 2.0 * coeff, e, y, spec);
    CHECK(std::abs(inv2 - 2.0 * inv) / std::abs(2.0 * inv) < 1e-12);

    // the t-integrand of the mirrored composition is positive (sampled)
    for (double t : {0.2, 1.0, 3.0})
        CHECK(fracops::conv_lemma_spectral(h1, s, e, y, t, 0.7, true, spec) > 0.0);
}

TEST_CASE("h-function: boundary limits and derivative formula") {
    // rho -> 0+ and rho -> inf limits vanish
    CHECK(std::abs(fracops::h_func(0.5, 1.0, 1e-8)) < 1e-7);
    CHECK(std::abs(fracops::h_func(0.5, 1.0, 1e8)) < 1e-3);
    // mu -> 0+ at fixed rho vanishes
    CHECK(std::abs(fracops::h_func(0.5, 1e-9, 1.0)) < 1e-12);

    // central difference matches the derivative formula at the stated sample
    const double h = 1e-5;
    auto hf = [](double rho) { return fracops::h_func(0.5, 1.0, rho); };
    const double d1 = (hf(1.0 + h) - hf(1.0 - h)) / (2.0 * h);
    const double d2 = (hf(1.0 + 0.5 * h) - hf(1.0 - 0.5 * h)) / h;
    const double fd = (4.0 * d2 - d1) / 3.0;
    CHECK(std::abs(fd - fracops::h_func_derivative(0.5, 1.0, 1.0)) < 1e-6);
    // frozen value of the formula at the sample
    CHECK(fracops::h_func_derivative(0.5, 1.0, 1.0) == doctest::Approx(0.0377368946773507).epsilon(1e-10));
}

TEST_CASE("technical lemma: quadrature vs closed form, small-mu limit, B-scaling") {
    const QuadratureSpec spec = spec_rel(1e-11);
    // frozen anchor
    const double lhs = fracops::cowboy_lhs(0.5, 1.0, 1.0, spec);
    CHECK(std::abs(lhs - 0.43981986951387264) / 0.43981986951387264 < 1e-10);

    // mu -> 0+ reduces to B^{s-1} Gamma(1-s) e^{-B}
    const double small = fracops::cowboy_lhs(0.3, 2.0, 1e-6, spec);
    const double lim = std::pow(2.0, -0.7) * special::gamma_fn(0.7) * std::exp(-2.0);
    CHECK(std::abs(small - lim) / lim < 1e-6);

    // value(2B)/value(B) = 2^{s-1} e^{-B mu/tanh mu}
    const double s = 0.6, B = 0.8, mu = 1.3;
    const double r = fracops::cowboy_lhs(s, 2.0 * B, mu, spec) / fracops::cowboy_lhs(s, B, mu, spec);
    const double expect = std::pow(2.0, s - 1.0) * std::exp(-B * mu / std::tanh(mu));
    CHECK(std::abs(r - expect) / expect < 1e-9);
}

TEST_CASE("J-twisted Gaussian: prefactor at z=0, Gaussian limit, z-factor") {
    const auto h1 = build_standard(StandardFamily::heisenberg, 1);
    const QuadratureSpec spec = spec_rel(1e-10);
    Eigen::VectorXd lam = Eigen::VectorXd::Constant(1, 1.0);

    // z = 0: the integral equals (2 sinh u sinh v/(|lambda| sinh(u+v)))^{m/2}
    Eigen::VectorXd z0 = Eigen::VectorXd::Zero(2);
    const auto r0 = fracops::jtwisted_gaussian(h1, lam, z0, 0.25, 0.25, spec);
    const double u = 2.0 * kPi * 0.25, v = 2.0 * kPi * 0.25;
    const double expect0 = 2.0 * std::sinh(u) * std::sinh(v) / std::sinh(u + v);
    CHECK(std::abs(r0.integral - expect0) / expect0 < 1e-9);
    CHECK(std::abs(r0.factored - expect0) / expect0 < 1e-13);

    // lambda -> 0 direction approaches the plain Gaussian convolution value:
    // A,B -> 1/(2 pi t), 1/(2 pi tau) and the J phase -> 1
    Eigen::VectorXd lam_small = Eigen::VectorXd::Constant(1, 1e-5);
    Eigen::VectorXd z(2);
    z << 0.5, 0.2;
    const auto rs = fracops::jtwisted_gaussian(h1, lam_small, z, 0.3, 0.4, spec);
    const double A = 1.0 / (2.0 * kPi * 0.3), B = 1.0 / (2.0 * kPi * 0.4);
    // Gaussian convolution: (2/(A+B))^{m/2} exp(-(pi/2)|z|^2 AB/(A+B))
    const double gauss = 2.0 / (A + B) * std::exp(-0.5 * kPi * z.squaredNorm() * A * B / (A + B));
    CHECK(std::abs(rs.integral - gauss) / gauss < 1e-6);

    // exponential z-factor at the stated sample point
    Eigen::VectorXd z1(2);
    z1 << 1.0, 0.0;
    const auto r1 = fracops::jtwisted_gaussian(h1, lam, z1, 0.25, 0.25, spec);
    const double ratio = r1.integral / r0.integral;
    const double expect_ratio = std::exp(-0.5 * kPi * 1.0 / std::tanh(2.0 * kPi * 0.5));
    CHECK(std::abs(ratio - expect_ratio) < 1e-6);
    // and the cubature matches the factored form
    CHECK(std::abs(r1.integral - r1.factored) / r1.factored < 1e-8);

    CHECK_THROWS_AS(fracops::jtwisted_gaussian(h1, Eigen::VectorXd::Zero(1), z1, 0.25, 0.25, spec),
                    std::invalid_argument);
}

TEST_CASE("chapman composition at one H^1 sample") {
    const auto h1 = build_standard(StandardFamily::heisenberg, 1);
    const QuadratureSpec spec = spec_rel(1e-5);
    const auto g = h1point(1.0, 0.0, 0.2);
    const double lhs = fracops::chapman_lhs(h1, g, 0.4, 0.6, spec);
    const double rhs = kernels::ghc_heat_kernel(h1, g, 1.0, spec_rel(1e-9));
    CHECK(std::abs(lhs - rhs) / rhs < 5e-3);
}

TEST_CASE("dimension guards") {
    const auto quat = build_standard(StandardFamily::quaternionic, 1);
    const QuadratureSpec spec;
    CHECK_THROWS_AS(fracops::conv_direct(quat, 0.5, epoint(4, 3), 0.5, 0.5, 0.5, false, spec),
                    std::invalid_argument);
    CHECK_THROWS_AS(fracops::riesz_apply(quat, 0.5, 1.0, epoint(4, 3), 1.0, spec),
                    fracops::BlockedPrecondition);
}
