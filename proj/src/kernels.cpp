#include "confheat/kernels.hpp"

#include "confheat/special.hpp"

#include <cmath>

namespace confheat::kernels {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kPoleCutoff = 1e-6; // homogeneous distance below which evaluation is rejected

using special::gamma_fn;
using special::abs_gamma_neg;
using special::log_sinh_ratio;
using special::x_coth;

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

void check_point(const HTypeStructure& s, const GroupPoint& g) {
    if (g.z.size() != s.m || g.sigma.size() != s.k)
        throw std::invalid_argument("kernel evaluation: point does not conform to the structure");
}

/// Fourth power of the homogeneous distance from the pole, (|z|^2+y^2)^2 + 16|sigma|^2.
double pole_gauge4(double zn2, double sn, double y) {
    const double a = zn2 + y * y;
    return a * a + 16.0 * sn * sn;
}

double gamma_prefactor(const FracOrder& o) {
    return o.sign() == Sign::plus ? gamma_fn(o.s()) : abs_gamma_neg(o.s());
}

} // namespace

double euclid_ext_kernel(int n, const FracOrder& o, std::span<const double> x, double y, double t) {
    if (n < 1) throw std::invalid_argument("euclid_ext_kernel: n must be >= 1");
    if (!(t > 0.0)) throw std::invalid_argument("euclid_ext_kernel: t must be positive");
    const double p = 0.5 * n + 1.0 - o.signed_s();
    return std::exp(-p * std::log(4.0 * kPi * t) - (norm2(x) + y * y) / (4.0 * t));
}

double euclid_fundsol(int n, const FracOrder& o, std::span<const double> x, double y) {
    if (n < 2) throw std::invalid_argument("euclid_fundsol: n must be >= 2");
    const double r2 = norm2(x) + y * y;
    if (r2 < kPoleCutoff * kPoleCutoff)
        throw PoleError("euclid_fundsol: evaluation at the pole");
    const double ss = o.signed_s();
    const double expo = 0.5 * (n - 2.0 * ss);
    return gamma_fn(expo) / (4.0 * std::pow(kPi, 0.5 * n + 1.0 - ss)) * std::pow(r2, -expo);
}

double euclid_heat_kernel(int n, double r2, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("euclid_heat_kernel: t must be positive");
    return std::exp(-0.5 * n * std::log(4.0 * kPi * t) - r2 / (4.0 * t));
}

double ext_q_radial(int m, int k, double signed_s, double znorm, double signorm,
                    double t, double y, const QuadratureSpec& spec) {
    if (!(t > 0.0)) throw std::invalid_argument("ext_q_radial: t must be positive");
    if (!(signed_s > -1.0 && signed_s <= 1.0))
        throw std::invalid_argument("ext_q_radial: signed order must lie in (-1, 1]");
    const double p = 0.5 * m + 1.0 - signed_s;
    const double R2 = znorm * znorm + y * y;
    const double l4pt = std::log(4.0 * kPi * t);
    const double w = 2.0 * kPi * t;
    auto profile = [&](double lam) {
        const double u = w * lam;
        return std::exp(-p * (l4pt + log_sinh_ratio(u)) - R2 * x_coth(u) / (4.0 * t));
    };
    return quad::radial_fourier(profile, signorm, k, spec).value;
}

double heat_kernel_radial(int m, int k, double znorm, double signorm, double t,
                          const QuadratureSpec& spec) {
    return ext_q_radial(m, k, 1.0, znorm, signorm, t, 0.0, spec);
}

double ghc_heat_kernel(const HTypeStructure& s, const GroupPoint& g, double t,
                       const QuadratureSpec& spec) {
    check_point(s, g);
    return heat_kernel_radial(s.m, s.k, g.z.norm(), g.sigma.norm(), t, spec);
}

double ext_kernel_q(const HTypeStructure& s, const FracOrder& o, const GroupPoint& g,
                    double t, double y, const QuadratureSpec& spec) {
    check_point(s, g);
    return ext_q_radial(s.m, s.k, o.signed_s(), g.z.norm(), g.sigma.norm(), t, y, spec);
}

double ext_kernel_q_timescaled(const HTypeStructure& s, const FracOrder& o, const GroupPoint& g,
                               double t, double y, const QuadratureSpec& spec) {
    check_point(s, g);
    if (!(t > 0.0)) throw std::invalid_argument("ext_kernel_q_timescaled: t must be positive");
    const double p = 0.5 * s.m + 1.0 - o.signed_s();
    const double R2 = g.z.squaredNorm() + y * y;
    auto profile = [&](double lam) {
        return std::exp(-p * log_sinh_ratio(lam) - R2 / (4.0 * t) * x_coth(lam));
    };
    const double pref = std::exp(s.k * std::log(2.0) - (0.5 * s.m + s.k + 1.0 - o.signed_s()) * std::log(4.0 * kPi * t));
    return pref * quad::radial_fourier(profile, g.sigma.norm() / (2.0 * kPi * t), s.k, spec).value;
}

double thin_kernel_K(const HTypeStructure& s, const FracOrder& o, const GroupPoint& g,
                     double t, const QuadratureSpec& spec) {
    const double pref = std::pow(4.0 * kPi * t, 1.0 - o.signed_s());
    return pref * ext_kernel_q(s, o, g, t, 0.0, spec);
}

double fundsol_subordinate(const HTypeStructure& s, const FracOrder& o, const GroupPoint& g,
                           double y, const QuadratureSpec& spec) {
    check_point(s, g);
    const double zn = g.z.norm(), sn = g.sigma.norm();
    if (pole_gauge4(zn * zn, sn, y) < std::pow(kPoleCutoff, 4))
        throw quad::DivergenceError("fundsol_subordinate: time integral diverges at the pole");
    const QuadratureSpec inner = spec.scaled_rel(0.1);
    auto integrand = [&](double t) {
        return ext_q_radial(s.m, s.k, o.signed_s(), zn, sn, t, y, inner);
    };
    return quad::integrate_semiinfinite(integrand, 1.0, spec).value;
}

double fundsol_closed_radial(int m, int k, double signed_s, double znorm, double signorm, double y) {
    const double W = pole_gauge4(znorm * znorm, signorm, y);
    if (W < std::pow(kPoleCutoff, 4))
        throw PoleError("fundsol_closed: evaluation within the pole neighborhood");
    const double s_abs = std::abs(signed_s);
    const FracOrder o(s_abs, signed_s > 0 ? Sign::plus : Sign::minus);
    const double gfac = gamma_prefactor(o);
    const double C = const_C(m, k, o);
    return gfac * std::pow(4.0 * kPi, signed_s - 1.0) * C *
           std::pow(W, -0.5 * (0.5 * m + k - signed_s));
}

double fundsol_closed(const HTypeStructure& s, const FracOrder& o, const GroupPoint& g, double y) {
    check_point(s, g);
    return fundsol_closed_radial(s.m, s.k, o.signed_s(), g.z.norm(), g.sigma.norm(), y);
}

double const_C(int m, int k, const FracOrder& o) {
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("const_C: m must be even and >= 2");
    if (k < 1) throw std::invalid_argument("const_C: k must be >= 1");
    const double ss = o.signed_s();
    const double gfac = gamma_prefactor(o);
    return std::pow(2.0, 0.5 * m + 2.0 * k - 3.0 * ss - 1.0) *
           gamma_fn(0.5 * (0.5 * m + 1.0 - ss)) * gamma_fn(0.5 * (0.5 * m + k - ss)) /
           (std::pow(kPi, 0.5 * (m + k + 1)) * gfac);
}

double gamma_ratio(int m, int k, double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("gamma_ratio: s must lie in (0,1)");
    return gamma_fn(0.25 * (m + 2.0 + 2.0 * s)) * gamma_fn(0.25 * (m + 2.0 * k + 2.0 * s)) /
           (gamma_fn(0.25 * (m + 2.0 - 2.0 * s)) * gamma_fn(0.25 * (m + 2.0 * k - 2.0 * s)));
}

} // namespace confheat::kernels
