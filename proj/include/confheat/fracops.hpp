#pragma once

#include "confheat/htype.hpp"
#include "confheat/kernels.hpp"
#include "confheat/quad.hpp"

#include <functional>
#include <optional>

namespace confheat::fracops {

using kernels::FracOrder;
using kernels::Sign;
using quad::QuadratureSpec;

/// A runtime-gated operation refused to run because its validation identity failed.
class BlockedPrecondition : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Where the heat semigroup lives: Euclidean R^n or an H-type group.
class Domain {
public:
    static Domain euclid(int n);
    static Domain htype(HTypeStructure s);
    bool is_euclid() const { return !group_.has_value(); }
    int euclid_n() const { return n_; }
    const HTypeStructure& group() const { return *group_; }

private:
    int n_ = 0;
    std::optional<HTypeStructure> group_;
};

/// P_t e^{(s)}(.,y)(g) = int_0^inf (4 pi tau)^{s-1} e^{-y^2/(4 tau)} p(g,e,t+tau) dtau
/// (the Chapman-Kolmogorov shortcut; for Euclidean domains the x-vector rides in g.z).
double semigroup_on_fundsol(const Domain& dom, const FracOrder& o, const GroupPoint& g,
                            double y, double t, const QuadratureSpec& spec = {});

/// -(1/Gamma(1-s)) int_0^inf t^{-s} dF/dt dt for a caller-supplied semigroup trace
/// F(t) = P_t u(g); the derivative is a central difference with one Richardson level,
/// step h = min(max(1e-4, 1e-3 t), t/2).
double balakrishnan_by_parts(const std::function<double(double)>& semigroup_trace, double s,
                             const QuadratureSpec& spec = {});

/// The fractional power L^s applied to the (+s) fundamental solution of the
/// extension operator: equals (2 pi y)^{2s} e^{(-s)}(g,y).
double frac_power_on_fundsol(const Domain& dom, double s, const GroupPoint& g, double y,
                             const QuadratureSpec& spec = {});

/// Nongeometric fundamental solution e^{(+/-s)}(g,y) = int (4 pi t)^{-(1 -/+ s)} e^{-y^2/4t} p(g,e,t) dt.
double nongeom_fundsol(const Domain& dom, const FracOrder& o, const GroupPoint& g, double y,
                       const QuadratureSpec& spec = {});

/// Spectral form of the group convolution int_G q_(-s)((g')^{-1} g, t, 0) q_(s)(g', tau, y) dg'
/// (one vertical-frequency integral). `mirrored` interchanges the roles of +/-s.
double conv_lemma_spectral(const HTypeStructure& s, double order_s, const GroupPoint& g,
                           double y, double t, double tau, bool mirrored = false,
                           const QuadratureSpec& spec = {});

/// The same convolution integral evaluated directly over the group (H^1 scale only),
/// with both kernels drawn from bicubic radial tables.
double conv_direct(const HTypeStructure& s, double order_s, const GroupPoint& g,
                   double y, double t, double tau, bool mirrored = false,
                   const QuadratureSpec& spec = {});

/// The conformal fractional operator L_s applied to the (+s) fundamental solution
/// e_(s)(.,y): the semigroup-difference representation with the small-t cancellation
/// removed by subtracting integrands pointwise under a shared (lambda,tau) parametrization.
/// Equals (2 pi y)^{2s} e_(-s)(g,y).
double conformal_apply(const HTypeStructure& s, double order_s, const GroupPoint& g, double y,
                       const QuadratureSpec& spec = {});

/// Cross-check route for conformal_apply: integrate t^{-s} d/dt P_{(-s),t} by finite
/// differences on the assembled semigroup trace. Slower and less accurate at small t;
/// kept to pin the two representations against each other.
double conformal_apply_by_parts(const HTypeStructure& s, double order_s, const GroupPoint& g,
                                double y, const QuadratureSpec& spec = {});

/// I_(2s) applied to f = coeff * e_(-s)(.,y); inverts the conformal operator on that
/// family, so riesz_apply(s, (2 pi y)^{2s}, g, y) = e_(s)(g,y). Gated behind a runtime
/// validation of the mirrored convolution identity against a direct convolution.
double riesz_apply(const HTypeStructure& s, double order_s, double coeff, const GroupPoint& g,
                   double y, const QuadratureSpec& spec = {});

struct JTwistedResult {
    double integral; ///< m-dimensional cubature of the J-phase Gaussian integral
    double factored; ///< (2 sinh u sinh v / (|lambda| sinh(u+v)))^{m/2} e^{-(pi/2)|z|^2 |lambda|/tanh 2pi(t+tau)|lambda|}
};

/// int_{R^m} e^{pi i <J(lambda) z, z'>} e^{-(pi/2)|z-z'|^2 A} e^{-(pi/2)|z'|^2 B} dz'
/// with A,B the tanh weights at times t,tau; returns the cubature value alongside the
/// factored closed form with the empirically established prefactor.
JTwistedResult jtwisted_gaussian(const HTypeStructure& s, const Eigen::VectorXd& lambda,
                                 const Eigen::VectorXd& z, double t, double tau,
                                 const QuadratureSpec& spec = {});

/// h_{s,mu}(rho): the auxiliary function whose rho-derivative generates the
/// integrated-by-parts kernel combination.
double h_func(double s, double mu, double rho);

/// Closed form of h'_{s,mu}(rho) = rho^s d/drho [ (a/sinh a)^{1-s} (b/sinh b)^{1+s} ],
/// a = rho mu/(1+rho), b = mu/(1+rho).
double h_func_derivative(double s, double mu, double rho);

/// Left side of the technical lemma: int_0^inf (mu/((1+rho) sinh a))^2 (sinh a/sinh b)^s
/// e^{-B mu / tanh a} drho.
double cowboy_lhs(double s, double B, double mu, const QuadratureSpec& spec = {});

/// Its closed form B^{s-1} (mu/sinh mu)^s Gamma(1-s) e^{-B mu / tanh mu}.
double cowboy_closed(double s, double B, double mu);

// -- brute-force group integrals at H^1 scale (used by the mass/semigroup checks) --

/// int_G f(|z|,|sigma|) dg over R^{m+k}, m+k <= 3, by box quadrature.
double group_integral(const HTypeStructure& s, const std::function<double(double, double)>& radial,
                      double half_width_z, double half_width_sigma, const QuadratureSpec& spec = {});

/// int_G p(g,g',t) p(g',e,tau) dg' for the heat kernel (table-backed).
double chapman_lhs(const HTypeStructure& s, const GroupPoint& g, double t, double tau,
                   const QuadratureSpec& spec = {});

/// Smallest dyadic radius at which |f| falls below cut * |f(0)|, accepting the
/// quadrature noise plateau of oscillatory tails.
double scan_decay_radius(const std::function<double(double)>& f, double cut,
                         const std::string& context);

} // namespace confheat::fracops
