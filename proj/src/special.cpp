#include "confheat/special.hpp"

#include <stdexcept>

namespace confheat::special {

namespace {

// Lanczos coefficients, g = 7, n = 9 (Godfrey's set).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kPi = 3.141592653589793238462643383279502884;

} // namespace

double gamma_fn(double x) {
    if (!(x > 0.0))
        throw std::domain_error("gamma_fn: argument must be positive");
    if (x < 0.5) {
        // reflection keeps the series argument >= 0.5
        return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i)
        a += kLanczos[i] / (z + i);
    const double t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double abs_gamma_neg(double s) {
    if (!(s > 0.0 && s < 1.0))
        throw std::domain_error("abs_gamma_neg: s must lie in (0,1)");
    return kPi / (s * std::sin(kPi * s) * gamma_fn(s));
}

double log_sinh_ratio(double x) {
    if (x < 0.0)
        throw std::domain_error("log_sinh_ratio: negative argument");
    if (x < 1e-4) {
        const double x2 = x * x;
        return x2 / 6.0 - x2 * x2 / 180.0;
    }
    if (x > 36.0) // log1p(-exp(-2x)) below 1e-31, drop it
        return x - std::log(2.0 * x);
    return std::log(std::sinh(x) / x);
}

double x_coth(double x) {
    if (x < 0.0)
        throw std::domain_error("x_coth: negative argument");
    if (x < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
    }
    if (x > 20.0)
        return x; // coth(x) - 1 < 5e-18
    return x / std::tanh(x);
}

double log_sinh(double x) {
    if (!(x > 0.0))
        throw std::domain_error("log_sinh: argument must be positive");
    if (x < 1e-4)
        return std::log(x) + x * x / 6.0;
    return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
}

double coth_diff(double b, double d) {
    if (!(b > 0.0) || !(d > 0.0))
        throw std::domain_error("coth_diff: arguments must be positive");
    return -std::exp(log_sinh(d) - log_sinh(b + d) - log_sinh(b));
}

double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

} // namespace confheat::special
