#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace confheat::quad {

/// Tolerances and budgets shared by every integral in the library.
struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;
    double tail_cut = 1e-16; ///< envelope threshold for truncating semi-infinite/box domains

    void validate() const;

    /// Copy with the relative tolerance scaled (used to tighten inner integrals
    /// of nested chains so the hierarchy follows the outer spec).
    QuadratureSpec scaled_rel(double factor) const {
        QuadratureSpec s = *this;
        s.rel_tol *= factor;
        if (s.rel_tol < 1e-14) s.rel_tol = 1e-14;
        return s;
    }
};

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    long long evaluations = 0;
};

class QuadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Subdivision budget exhausted before the tolerance was met; carries the best estimate.
class ConvergenceFailure : public QuadError {
public:
    ConvergenceFailure(const std::string& what, QuadResult best)
        : QuadError(what), best_estimate(best) {}
    QuadResult best_estimate;
};

/// The integrand produced a non-finite value.
class EvaluationError : public QuadError {
public:
    using QuadError::QuadError;
};

/// Tail envelope failed to fall below tail_cut within the representable range.
class DivergenceError : public QuadError {
public:
    using QuadError::QuadError;
};

using Fn1 = std::function<double(double)>;
using FnN = std::function<double(std::span<const double>)>;

/// Adaptive Gauss-Kronrod (7,15) over [a, b].
QuadResult integrate_adaptive(const Fn1& f, double a, double b, const QuadratureSpec& spec = {});

/// Same engine with caller-chosen initial breakpoints (ascending, >= 2 entries).
QuadResult integrate_adaptive(const Fn1& f, std::span<const double> breakpoints,
                              const QuadratureSpec& spec = {});

/// Integral of f over (0, inf) where f(t) ~ c t^{alpha-1} as t -> 0+.
/// The endpoint exponent selects the change of variable t = exp((pi/(2 alpha)) sinh u),
/// which neutralizes the endpoint behavior; the mapped integrand is handled by
/// integrate_adaptive over the envelope-truncated u-range.
QuadResult integrate_semiinfinite(const Fn1& f, double endpoint_exponent,
                                  const QuadratureSpec& spec = {});

/// int_{R^k} e^{2 pi i <sigma, lambda>} f(|lambda|) dlambda for |sigma| = r_out, k in {1,3}.
/// k=1: 2 int_0^inf cos(2 pi r_out s) f(s) ds;
/// k=3: 4 pi int_0^inf s^2 f(s) sinc(2 pi r_out s) ds  (the r_out -> 0 limit is built in).
QuadResult radial_fourier(const Fn1& profile, double r_out, int k,
                          const QuadratureSpec& spec = {});

/// Integral over R^dim (dim in 2..4) with the box half-width found by scanning the
/// supplied radial decay envelope down to tail_cut, then tensorized adaptive quadrature.
QuadResult integrate_box(const FnN& f, int dim, const Fn1& envelope,
                         const QuadratureSpec& spec = {});

/// Same, with an explicit half-width per axis.
QuadResult integrate_box(const FnN& f, std::span<const double> half_widths,
                         const QuadratureSpec& spec = {});

} // namespace confheat::quad
