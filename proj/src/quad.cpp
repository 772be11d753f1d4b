#include "confheat/quad.hpp"

#include "confheat/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace confheat::quad {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Gauss-Kronrod (7,15) nodes and weights on [-1,1] (QUADPACK QK15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Interval {
    double a, b;
    double value;
    double err;
    double floor; ///< roundoff floor 50 eps resabs of the rule on this interval
    bool splittable;
};

struct IntervalWorse {
    bool operator()(const Interval& x, const Interval& y) const {
        if (x.err != y.err) return x.err < y.err;
        return x.a > y.a; // deterministic tie-break
    }
};

struct Evaluator {
    const Fn1& f;
    long long count = 0;
    double operator()(double x) {
        ++count;
        const double v = f(x);
        if (!std::isfinite(v))
            throw EvaluationError("integrand returned a non-finite value at x = " + std::to_string(x));
        return v;
    }
};

Interval gk15(Evaluator& ev, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = ev(c);

    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    double fv[8][2];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        fv[j][0] = ev(c - dx);
        fv[j][1] = ev(c + dx);
        const double fsum = fv[j][0] + fv[j][1];
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::abs(fv[j][0]) + std::abs(fv[j][1]));
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[j][0] - reskh) + std::abs(fv[j][1] - reskh));
    resasc *= std::abs(h);
    resabs *= std::abs(h);

    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double rounding = 50.0 * eps * resabs;
    err = std::max(err, rounding);

    const double width_floor = 100.0 * eps * std::max({std::abs(a), std::abs(b), 1e-300});
    return Interval{a, b, resk * h, err, rounding, (b - a) > width_floor};
}

// Deterministic compensated sum of per-interval results ordered by left endpoint.
QuadResult collect(std::vector<Interval>& done, long long evals) {
    std::sort(done.begin(), done.end(),
              [](const Interval& x, const Interval& y) { return x.a < y.a; });
    double sum = 0.0, comp = 0.0, err = 0.0;
    for (const Interval& iv : done) {
        const double t = iv.value - comp;
        const double next = sum + t;
        comp = (next - sum) - t;
        sum = next;
        err += iv.err;
    }
    return QuadResult{sum, err, evals};
}

QuadResult adaptive_core(const Fn1& f, std::span<const double> pts, const QuadratureSpec& spec) {
    Evaluator ev{f};
    std::priority_queue<Interval, std::vector<Interval>, IntervalWorse> active;
    std::vector<Interval> frozen; // intervals too narrow to split further

    double total_value = 0.0, total_err = 0.0, total_floor = 0.0;
    auto push = [&](const Interval& iv) {
        total_value += iv.value;
        total_err += iv.err;
        total_floor += iv.floor;
        if (iv.splittable)
            active.push(iv);
        else
            frozen.push_back(iv);
    };

    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        push(gk15(ev, pts[i], pts[i + 1]));

    int splits = 0;
    // within 2x of the accumulated roundoff floor no further splitting can help
    const auto tolerance = [&] {
        return std::max({spec.abs_tol, spec.rel_tol * std::abs(total_value), 2.0 * total_floor});
    };
    while (total_err > tolerance() && !active.empty()) {
        if (splits >= spec.max_subdivisions) {
            std::vector<Interval> done = frozen;
            while (!active.empty()) { done.push_back(active.top()); active.pop(); }
            QuadResult best = collect(done, ev.count);
            throw ConvergenceFailure("integrate_adaptive: subdivision budget exhausted", best);
        }
        Interval worst = active.top();
        active.pop();
        total_value -= worst.value;
        total_err -= worst.err;
        total_floor -= worst.floor;
        const double mid = 0.5 * (worst.a + worst.b);
        push(gk15(ev, worst.a, mid));
        push(gk15(ev, mid, worst.b));
        ++splits;
    }

    std::vector<Interval> done = std::move(frozen);
    while (!active.empty()) { done.push_back(active.top()); active.pop(); }
    QuadResult res = collect(done, ev.count);
    if (res.err_estimate > std::max({spec.abs_tol, spec.rel_tol * std::abs(res.value), 2.0 * total_floor}) &&
        done.size() > 1 && splits >= spec.max_subdivisions)
        throw ConvergenceFailure("integrate_adaptive: subdivision budget exhausted", res);
    return res;
}

} // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
    if (max_subdivisions < 1)
        throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    if (!(tail_cut > 0.0))
        throw std::invalid_argument("QuadratureSpec: tail_cut must be positive");
}

QuadResult integrate_adaptive(const Fn1& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (!(a < b))
        throw std::invalid_argument("integrate_adaptive: requires a < b");
    const double pts[2] = {a, b};
    return adaptive_core(f, pts, spec);
}

QuadResult integrate_adaptive(const Fn1& f, std::span<const double> breakpoints,
                              const QuadratureSpec& spec) {
    spec.validate();
    if (breakpoints.size() < 2)
        throw std::invalid_argument("integrate_adaptive: needs at least two breakpoints");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw std::invalid_argument("integrate_adaptive: breakpoints must be strictly ascending");
    return adaptive_core(f, breakpoints, spec);
}

QuadResult integrate_semiinfinite(const Fn1& f, double endpoint_exponent,
                                  const QuadratureSpec& spec) {
    spec.validate();
    if (!(endpoint_exponent > 0.0))
        throw std::invalid_argument("integrate_semiinfinite: endpoint exponent must be positive");

    const double rate = 0.5 * kPi / endpoint_exponent;
    long long map_evals = 0;
    auto mapped = [&](double u) -> double {
        const double logt = rate * std::sinh(u);
        if (logt > 705.0 || logt < -705.0)
            return 0.0; // t outside the representable range; a convergent tail contributes nothing here
        const double t = std::exp(logt);
        ++map_evals;
        const double v = f(t);
        if (!std::isfinite(v))
            throw EvaluationError("integrate_semiinfinite: integrand non-finite at t = " + std::to_string(t));
        return v * t * rate * std::cosh(u);
    };

    // Scan outward for the envelope truncation points.
    const double step = 0.25;
    double scale = 0.0;
    for (int i = -8; i <= 8; ++i) scale = std::max(scale, std::abs(mapped(step * i)));

    auto scan = [&](double dir) -> double {
        double u = 2.0 * dir;
        int below = 0;
        while (true) {
            if (std::abs(rate * std::sinh(u)) > 704.0) {
                // t ran off the representable range; the last computable sample decides
                const double u_edge = dir * std::asinh(703.0 / rate);
                if (std::abs(mapped(u_edge)) > spec.tail_cut * scale)
                    throw DivergenceError(dir > 0
                        ? "integrate_semiinfinite: divergent tail (envelope above tail_cut at the truncation bound)"
                        : "integrate_semiinfinite: divergent endpoint (exponent hint too large?)");
                return u;
            }
            const double g = std::abs(mapped(u));
            scale = std::max(scale, g);
            if (g <= spec.tail_cut * scale)
                ++below;
            else
                below = 0;
            if (below >= 4) return u;
            u += dir * step;
        }
    };

    const double u_hi = scan(+1.0);
    const double u_lo = scan(-1.0);
    QuadResult res = integrate_adaptive(mapped, u_lo, u_hi, spec);
    res.evaluations = map_evals;
    return res;
}

QuadResult radial_fourier(const Fn1& profile, double r_out, int k, const QuadratureSpec& spec) {
    spec.validate();
    if (k != 1 && k != 3)
        throw std::invalid_argument("radial_fourier: unsupported vertical dimension k = " + std::to_string(k) +
                                    " (supported: 1, 3)");
    const double r = std::abs(r_out);

    long long env_evals = 0;
    auto envelope = [&](double s) {
        ++env_evals;
        const double v = std::abs(profile(s));
        return k == 1 ? 2.0 * v : 4.0 * kPi * s * s * v;
    };

    double scale = envelope(1e-8);
    for (double s : {0.25, 0.5, 1.0}) scale = std::max(scale, envelope(s));
    double T = 1.0;
    while (true) {
        double tail = 0.0;
        for (int i = 0; i <= 8; ++i) tail = std::max(tail, envelope(T + i * T / 8.0));
        scale = std::max(scale, tail);
        if (tail <= spec.tail_cut * scale) break;
        T *= 2.0;
        if (T > 1.099511627776e12) // 2^40
            throw DivergenceError("radial_fourier: profile envelope not below tail_cut by the truncation bound");
    }

    std::vector<double> pts{0.0};
    if (scale > 0.0) {
        // Dyadic ladder descending to the profile's inner scale, so a support much
        // narrower than T still lands on quadrature nodes.
        double prev_env = envelope(T);
        double lo = 0.5 * T;
        int flat = 0;
        while (lo > 1e-300 && pts.size() < 400) {
            pts.push_back(lo);
            const double e_lo = envelope(lo);
            if (e_lo > 0.0 && prev_env > 0.0 && e_lo < 2.0 * prev_env && e_lo > 0.5 * prev_env) {
                if (++flat >= 3) break;
            } else {
                flat = 0;
            }
            prev_env = e_lo;
            lo *= 0.5;
        }
        // Subdivide at half-periods of the oscillation frequency 2 pi r.
        if (r > 0.0) {
            const double half_period = 0.5 / r;
            const double n = std::floor(T / half_period);
            if (n <= 4.0 * spec.max_subdivisions) {
                for (double j = 1.0; j <= n; j += 1.0) pts.push_back(j * half_period);
            }
        }
    }
    pts.push_back(T);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    while (pts.size() >= 2 && pts.back() > T) pts.pop_back();
    if (pts.back() < T) pts.push_back(T);

    Fn1 w;
    if (k == 1) {
        w = [&](double s) { return profile(s) * std::cos(2.0 * kPi * r * s); };
    } else {
        w = [&](double s) { return s * s * profile(s) * special::sinc(2.0 * kPi * r * s); };
    }
    QuadResult res = integrate_adaptive(w, pts, spec);
    const double factor = (k == 1) ? 2.0 : 4.0 * kPi;
    res.value *= factor;
    res.err_estimate *= factor;
    res.evaluations += env_evals;
    return res;
}

QuadResult integrate_box(const FnN& f, std::span<const double> half_widths,
                         const QuadratureSpec& spec) {
    spec.validate();
    const int dim = static_cast<int>(half_widths.size());
    if (dim < 2 || dim > 4)
        throw std::invalid_argument("integrate_box: dimension must be in 2..4");
    for (double hw : half_widths)
        if (!(hw > 0.0))
            throw std::invalid_argument("integrate_box: half-widths must be positive");

    long long evals = 0;
    std::vector<double> x(dim, 0.0);

    // Innermost integrals run at the caller's tolerance, outer levels slightly looser;
    // the axis is always split at 0 so even integrands with a singular origin stay off-node.
    std::function<double(int)> level = [&](int axis) -> double {
        const double R = half_widths[axis];
        // split at 0 and on a short dyadic ladder so narrow features near the
        // origin land on quadrature nodes
        std::vector<double> pts{-R};
        for (int j = 1; j <= 6; ++j) pts.push_back(-R / double(1 << j));
        pts.push_back(0.0);
        for (int j = 6; j >= 1; --j) pts.push_back(R / double(1 << j));
        pts.push_back(R);
        Fn1 g = [&, axis](double xi) -> double {
            x[axis] = xi;
            if (axis + 1 == dim) {
                ++evals;
                return f(x);
            }
            return level(axis + 1);
        };
        QuadratureSpec level_spec = spec;
        level_spec.abs_tol = spec.abs_tol / (dim - axis);
        QuadResult r = integrate_adaptive(g, pts, level_spec);
        return r.value;
    };

    const double v = level(0);
    return QuadResult{v, std::abs(v) * spec.rel_tol * dim, evals};
}

QuadResult integrate_box(const FnN& f, int dim, const Fn1& envelope, const QuadratureSpec& spec) {
    spec.validate();
    if (dim < 2 || dim > 4)
        throw std::invalid_argument("integrate_box: dimension must be in 2..4");
    const double e0 = std::abs(envelope(0.0)) + std::numeric_limits<double>::min();
    double R = 1.0;
    while (std::abs(envelope(R)) > spec.tail_cut * e0) {
        R *= 2.0;
        if (R > 1.073741824e9)
            throw DivergenceError("integrate_box: envelope not below tail_cut by the truncation bound");
    }
    std::vector<double> hw(dim, R);
    return integrate_box(f, hw, spec);
}

} // namespace confheat::quad
