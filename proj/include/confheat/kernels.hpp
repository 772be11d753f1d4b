#pragma once

#include "confheat/htype.hpp"
#include "confheat/quad.hpp"

#include <span>
#include <stdexcept>

namespace confheat::kernels {

using quad::QuadratureSpec;

enum class Sign { plus, minus };

/// Evaluation rejected because the point is within the excluded neighborhood of the pole.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Signed fractional order: selects the (+s) or (-s) kernel family, s in (0,1) strictly.
class FracOrder {
public:
    explicit FracOrder(double s, Sign sign = Sign::plus) : s_(s), sign_(sign) {
        if (!(s > 0.0 && s < 1.0))
            throw std::invalid_argument("FracOrder: s must lie strictly in (0,1)");
    }
    double s() const { return s_; }
    Sign sign() const { return sign_; }
    double signed_s() const { return sign_ == Sign::plus ? s_ : -s_; }

private:
    double s_;
    Sign sign_;
};

/// Evaluation point: group element (or Euclidean x in .g.z), extension variable y, time t.
struct EvalPoint {
    GroupPoint g;
    double y = 0.0;
    double t = 0.0;
};

// ---- Euclidean chain ----

/// (4 pi t)^{-(n/2 + 1 -/+ s)} exp(-(|x|^2 + y^2)/(4t)).
double euclid_ext_kernel(int n, const FracOrder& o, std::span<const double> x, double y, double t);

/// Gamma((n -/+ 2s)/2) / (4 pi^{n/2+1 -/+ s}) * (|x|^2 + y^2)^{-(n -/+ 2s)/2}.
double euclid_fundsol(int n, const FracOrder& o, std::span<const double> x, double y);

/// Gaussian heat kernel (4 pi t)^{-n/2} exp(-r2/(4t)) as a function of r2 = |x|^2.
double euclid_heat_kernel(int n, double r2, double t);

// ---- H-type kernels; everything depends on the point through (|z|, |sigma|) only ----

/// Extension kernel q_(+/-s)((z,sigma),t,y) as a radial function, in the normalization
/// with frequency variable carrying the 2 pi factor:
///   int_{R^k} e^{2 pi i <sigma,lambda>} (|lambda|/(2 sinh 2pi t|lambda|))^{m/2+1-ss}
///            e^{-(pi/2)(zn^2+y^2)|lambda|/tanh(2pi t|lambda|)} dlambda
/// with ss = signed order. ss = 1 gives the heat kernel (exponent m/2, unit prefactor).
double ext_q_radial(int m, int k, double signed_s, double znorm, double signorm,
                    double t, double y, const QuadratureSpec& spec);

/// Gaveau-Hulanicki-Cygan heat kernel p((z,sigma), e, t) as a radial function.
double heat_kernel_radial(int m, int k, double znorm, double signorm, double t,
                          const QuadratureSpec& spec);

double ghc_heat_kernel(const HTypeStructure& s, const GroupPoint& g, double t,
                       const QuadratureSpec& spec = {});

double ext_kernel_q(const HTypeStructure& s, const FracOrder& o, const GroupPoint& g,
                    double t, double y, const QuadratureSpec& spec = {});

/// Same kernel through the time-scaled frequency variable (prefactor
/// 2^k (4 pi t)^{-(m/2+k+1-ss)}, profile in |lambda|/sinh|lambda|, frequency |sigma|/(2 pi t)).
/// Retained as a cross-check of the canonical normalization.
double ext_kernel_q_timescaled(const HTypeStructure& s, const FracOrder& o, const GroupPoint& g,
                               double t, double y, const QuadratureSpec& spec = {});

/// Thin-space kernel K_(+/-s)(g,t) = (4 pi t)^{1 -/+ s} q_(+/-s)(g,t,0).
double thin_kernel_K(const HTypeStructure& s, const FracOrder& o, const GroupPoint& g,
                     double t, const QuadratureSpec& spec = {});

/// Fundamental solution by Bochner subordination: int_0^inf q_(+/-s)(g,t,y) dt.
double fundsol_subordinate(const HTypeStructure& s, const FracOrder& o, const GroupPoint& g,
                           double y, const QuadratureSpec& spec = {});

/// Closed-form fundamental solution:
///   (+s): Gamma(s) (4pi)^{s-1} C_(s)(m,k)  ((|z|^2+y^2)^2 + 16|sigma|^2)^{-(m/2+k-s)/2}
///   (-s): |Gamma(-s)| (4pi)^{-1-s} C_(-s)(m,k) ((|z|^2+y^2)^2 + 16|sigma|^2)^{-(m/2+k+s)/2}
double fundsol_closed(const HTypeStructure& s, const FracOrder& o, const GroupPoint& g, double y);

double fundsol_closed_radial(int m, int k, double signed_s, double znorm, double signorm, double y);

/// C_(+/-s)(m,k) = 2^{m/2+2k-3ss-1} Gamma((m/2+1-ss)/2) Gamma((m/2+k-ss)/2)
///                 / (pi^{(m+k+1)/2} gfac),  gfac = Gamma(s) or |Gamma(-s)|.
double const_C(int m, int k, const FracOrder& o);

/// Gamma((m+2+2s)/4) Gamma((m+2k+2s)/4) / (Gamma((m+2-2s)/4) Gamma((m+2k-2s)/4)).
double gamma_ratio(int m, int k, double s);

} // namespace confheat::kernels
