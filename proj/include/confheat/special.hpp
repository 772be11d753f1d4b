#pragma once

#include <cmath>

namespace confheat::special {

/// Gamma function on the positive reals, Lanczos approximation (g = 7, 9 terms).
/// Relative accuracy better than 1e-13 on [1e-3, 170].
double gamma_fn(double x);

/// |Gamma(-s)| for s in (0,1), via the reflection formula
/// Gamma(-s) = -pi / (s sin(pi s) Gamma(s)).
double abs_gamma_neg(double s);

/// log(sinh(x)/x) for x >= 0, accurate for all magnitudes (series near 0,
/// shifted exponential form for large x).
double log_sinh_ratio(double x);

/// x * coth(x) for x >= 0, with the x -> 0 limit value 1.
double x_coth(double x);

/// log(sinh(x)) for x > 0 without overflow.
double log_sinh(double x);

/// coth(b + d) - coth(b) = -sinh(d) / (sinh(b+d) sinh(b)) for b, d > 0,
/// evaluated without cancellation or overflow.
double coth_diff(double b, double d);

/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

} // namespace confheat::special
