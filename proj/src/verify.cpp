#include "confheat/verify.hpp"

#include "confheat/fracops.hpp"
#include "confheat/htype.hpp"
#include "confheat/kernels.hpp"
#include "confheat/special.hpp"
#include "confheat/table.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

namespace confheat::verify {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kRelEps = 1e-300;

using kernels::FracOrder;
using kernels::Sign;
using special::gamma_fn;

// Canonical parameter order for CSV columns.
const std::vector<std::string> kParamOrder = {
    "family", "n", "m", "k", "sign", "s", "B", "mu", "rho",
    "lambda", "z", "sigma", "y", "t", "tau",
};

struct Resolved {
    ParamMap values;

    bool has(const std::string& key) const { return values.count(key) > 0; }

    double scalar(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end())
            throw UsageError("missing parameter: " + key);
        if (const double* d = std::get_if<double>(&it->second)) return *d;
        if (const auto* v = std::get_if<std::vector<double>>(&it->second)) {
            if (v->size() == 1) return (*v)[0];
        }
        throw UsageError("parameter " + key + " must be a scalar");
    }

    std::vector<double> vec(const std::string& key, int len) const {
        auto it = values.find(key);
        if (it == values.end())
            return std::vector<double>(len, 0.0);
        std::vector<double> v;
        if (const double* d = std::get_if<double>(&it->second))
            v = {*d};
        else if (const auto* vv = std::get_if<std::vector<double>>(&it->second))
            v = *vv;
        else
            throw UsageError("parameter " + key + " must be numeric");
        if (static_cast<int>(v.size()) != len)
            throw UsageError("parameter " + key + " must have length " + std::to_string(len));
        return v;
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        auto it = values.find(key);
        if (it == values.end()) return fallback;
        if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
        throw UsageError("parameter " + key + " must be a name");
    }
};

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

HTypeStructure resolve_group(Resolved& r) {
    const std::string family = to_lower(r.text("family", ""));
    if (!family.empty()) {
        const int n = r.has("n") ? static_cast<int>(r.scalar("n")) : 1;
        r.values["family"] = family;
        r.values["n"] = static_cast<double>(n);
        if (family == "heisenberg") {
            auto s = build_standard(StandardFamily::heisenberg, n);
            r.values["m"] = static_cast<double>(s.m);
            r.values["k"] = static_cast<double>(s.k);
            return s;
        }
        if (family == "quaternionic") {
            auto s = build_standard(StandardFamily::quaternionic, n);
            r.values["m"] = static_cast<double>(s.m);
            r.values["k"] = static_cast<double>(s.k);
            return s;
        }
        throw UsageError("unknown family: " + family + " (expected heisenberg or quaternionic)");
    }
    const int m = r.has("m") ? static_cast<int>(r.scalar("m")) : 2;
    const int k = r.has("k") ? static_cast<int>(r.scalar("k")) : 1;
    r.values["m"] = static_cast<double>(m);
    r.values["k"] = static_cast<double>(k);
    if (k == 1 && m >= 2 && m % 2 == 0)
        return build_standard(StandardFamily::heisenberg, m / 2);
    if (k == 3 && m >= 4 && m % 4 == 0)
        return build_standard(StandardFamily::quaternionic, m / 4);
    throw UsageError("no standard H-type family with m=" + std::to_string(m) +
                     ", k=" + std::to_string(k));
}

GroupPoint resolve_point(Resolved& r, const HTypeStructure& s) {
    const auto z = r.vec("z", s.m);
    const auto sg = r.vec("sigma", s.k);
    GroupPoint g;
    g.z = Eigen::Map<const Eigen::VectorXd>(z.data(), z.size());
    g.sigma = Eigen::Map<const Eigen::VectorXd>(sg.data(), sg.size());
    r.values["z"] = z;
    r.values["sigma"] = sg;
    return g;
}

Sign resolve_sign(Resolved& r) {
    const std::string sgn = to_lower(r.text("sign", "plus"));
    r.values["sign"] = sgn;
    if (sgn == "plus" || sgn == "+") return Sign::plus;
    if (sgn == "minus" || sgn == "-") return Sign::minus;
    throw UsageError("parameter sign must be plus or minus");
}

// finite difference of h_func in rho, central with one Richardson level
double h_func_fd(double s, double mu, double rho) {
    const double h = std::min(1e-4 * std::max(1.0, rho), 0.5 * rho);
    const double d1 = (fracops::h_func(s, mu, rho + h) - fracops::h_func(s, mu, rho - h)) / (2.0 * h);
    const double d2 = (fracops::h_func(s, mu, rho + 0.5 * h) - fracops::h_func(s, mu, rho - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

struct CheckEntry {
    CheckDescriptor desc;
    std::function<std::pair<double, double>(Resolved&, const QuadratureSpec&)> run;
};

QuadratureSpec make_spec(double rel, double abs) {
    QuadratureSpec s;
    s.rel_tol = rel;
    s.abs_tol = abs;
    return s;
}

double pole_gauge4(double z2, double sn, double y) {
    const double a = z2 + y * y;
    return a * a + 16.0 * sn * sn;
}

const std::vector<CheckEntry>& registry() {
    static const std::vector<CheckEntry> entries = [] {
        std::vector<CheckEntry> v;

        v.push_back({{"EUCLID_INTERTWINE",
                      "(-Delta)^s of the Euclidean power function vs its Gamma-constant closed form",
                      {"n", "s", "y"},
                      {"z"},
                      1e-6, false, make_spec(1e-8, 1e-14)},
                     [](Resolved& r, const QuadratureSpec& spec) {
                         const int n = static_cast<int>(r.scalar("n"));
                         const double s = r.scalar("s");
                         const double y = r.scalar("y");
                         const auto x = r.vec("z", n);
                         r.values["z"] = x;
                         GroupPoint g;
                         g.z = Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
                         g.sigma = Eigen::VectorXd::Zero(0);
                         const double fp = fracops::frac_power_on_fundsol(fracops::Domain::euclid(n), s, g, y, spec);
                         const double x2 = g.z.squaredNorm();
                         const double lhs = 4.0 * std::pow(kPi, 0.5 * n + 1.0 - s) / gamma_fn(0.5 * (n - 2.0 * s)) * fp;
                         const double rhs = gamma_fn(0.5 * n + s) / gamma_fn(0.5 * n - s) *
                                            std::pow(2.0 * y, 2.0 * s) * std::pow(x2 + y * y, -0.5 * (n + 2.0 * s));
                         return std::make_pair(lhs, rhs);
                     }});

        v.push_back({{"EUCLID_DIMFREE",
                      "dimension-free intertwining: L^s e^(s)(.,y) = (2 pi y)^{2s} e^(-s) on R^n",
                      {"n", "s", "y"},
                      {"z"},
                      1e-6, false, make_spec(1e-8, 1e-14)},
                     [](Resolved& r, const QuadratureSpec& spec) {
                         const int n = static_cast<int>(r.scalar("n"));
                         const double s = r.scalar("s");
                         const double y = r.scalar("y");
                         const auto x = r.vec("z", n);
                         r.values["z"] = x;
                         GroupPoint g;
                         g.z = Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
                         g.sigma = Eigen::VectorXd::Zero(0);
                         const double lhs = fracops::frac_power_on_fundsol(fracops::Domain::euclid(n), s, g, y, spec);
                         const double rhs = std::pow(2.0 * kPi * y, 2.0 * s) *
                                            kernels::euclid_fundsol(n, FracOrder(s, Sign::minus),
                                                                    std::span<const double>(x), y);
                         return std::make_pair(lhs, rhs);
                     }});

        v.push_back({{"NONGEOM_HTYPE",
                      "non-geometric intertwining on an H-type group via the heat semigroup",
                      {"s", "y"},
                      {"family", "n", "m", "k", "z", "sigma"},
                      1e-3, false, make_spec(1e-5, 1e-14)},
                     [](Resolved& r, const QuadratureSpec& spec) {
                         const auto grp = resolve_group(r);
                         const auto g = resolve_point(r, grp);
                         const double s = r.scalar("s");
                         const double y = r.scalar("y");
                         const auto dom = fracops::Domain::htype(grp);
                         const double lhs = fracops::frac_power_on_fundsol(dom, s, g, y, spec);
                         const double rhs = std::pow(2.0 * kPi * y, 2.0 * s) *
                                            fracops::nongeom_fundsol(dom, FracOrder(s, Sign::minus), g, y, spec);
                         return std::make_pair(lhs, rhs);
                     }});

        v.push_back({{"THEOREM_A",
                      "subordinated fundamental solution vs its closed form",
                      {"s", "y"},
                      {"family", "n", "m", "k", "sign", "z", "sigma"},
                      1e-5, false, make_spec(1e-7, 1e-15)},
                     [](Resolved& r, const QuadratureSpec& spec) {
                         const auto grp = resolve_group(r);
                         const auto g = resolve_point(r, grp);
                         const double s = r.scalar("s");
                         const double y = r.scalar("y");
                         const FracOrder o(s, resolve_sign(r));
                         const double lhs = kernels::fundsol_subordinate(grp, o, g, y, spec);
                         const double rhs = kernels::fundsol_closed(grp, o, g, y);
                         return std::make_pair(lhs, rhs);
                     }});

        v.push_back({{"LEMMA_CONV",
                      "group convolution of the two extension kernels vs its spectral form",
                      {"s", "y", "t", "tau"},
                      {"family", "n", "m", "k", "z", "sigma"},
                      5e-3, false, make_spec(1e-5, 1e-14)},
                     [](Resolved& r, const QuadratureSpec& spec) {
                         const auto grp = resolve_group(r);
                         const auto g = resolve_point(r, grp);
                         const double s = r.scalar("s");
                         const double y = r.scalar("y");
                         const double t = r.scalar("t");
                         const double tau = r.scalar("tau");
                         const double lhs = fracops::conv_direct(grp, s, g, y, t, tau, false, spec);
                         const double rhs = fracops::conv_lemma_spectral(grp, s, g, y, t, tau, false,
                                                                         spec.scaled_rel(0.1));
                         return std::make_pair(lhs, rhs);
                     }});

        v.push_back({{"COWBOY",
                      "technical lemma: rho-integral of the sinh-power kernel vs its closed form",
                      {"s", "B", "mu"},
                      {},
                      1e-8, false, make_spec(1e-10, 1e-15)},
                     [](Resolved& r, const QuadratureSpec& spec) {
                         const double s = r.scalar("s");
                         const double B = r.scalar("B");
                         const double mu = r.scalar("mu");
                         return std::make_pair(fracops::cowboy_lhs(s, B, mu, spec),
                                               fracops::cowboy_closed(s, B, mu));
                     }});

        v.push_back({{"H_DERIV",
                      "finite difference of the h-function vs its derivative formula (absolute error)",
                      {"s", "mu", "rho"},
                      {},
                      1e-6, true, make_spec(1e-10, 1e-15)},
                     [](Resolved& r, const QuadratureSpec&) {
                         const double s = r.scalar("s");
                         const double mu = r.scalar("mu");
                         const double rho = r.scalar("rho");
                         return std::make_pair(h_func_fd(s, mu, rho),
                                               fracops::h_func_derivative(s, mu, rho));
                     }});

        v.push_back({{"CONFORMAL",
                      "geometric intertwining: L_s e_(s)(.,y) = (2 pi y)^{2s} e_(-s)",
                      {"s", "y"},
                      {"family", "n", "m", "k", "z", "sigma"},
                      1e-3, false, make_spec(3e-6, 1e-15)},
                     [](Resolved& r, const QuadratureSpec& spec) {
                         const auto grp = resolve_group(r);
                         const auto g = resolve_point(r, grp);
                         const double s = r.scalar("s");
                         const double y = r.scalar("y");
                         const double lhs = fracops::conformal_apply(grp, s, g, y, spec);
                         const double rhs = std::pow(2.0 * kPi * y, 2.0 * s) *
                                            kernels::fundsol_closed(grp, FracOrder(s, Sign::minus), g, y);
                         return std::make_pair(lhs, rhs);
                     }});

        v.push_back({{"GNONEU",
                      "conformal operator on the power function vs the Gamma-ratio closed form",
                      {"s", "y"},
                      {"family", "n", "m", "k", "z", "sigma"},
                      1e-3, false, make_spec(3e-6, 1e-15)},
                     [](Resolved& r, const QuadratureSpec& spec) {
                         const auto grp = resolve_group(r);
                         const auto g = resolve_point(r, grp);
                         const double s = r.scalar("s");
                         const double y = r.scalar("y");
                         const FracOrder plus(s, Sign::plus);
                         const double ca = fracops::conformal_apply(grp, s, g, y, spec);
                         const double lhs = std::pow(4.0 * kPi, 1.0 - s) /
                                            (gamma_fn(s) * kernels::const_C(grp.m, grp.k, plus)) * ca;
                         const double W = pole_gauge4(g.z.squaredNorm(), g.sigma.norm(), y);
                         const double rhs = kernels::gamma_ratio(grp.m, grp.k, s) *
                                            std::pow(4.0 * y, 2.0 * s) *
                                            std::pow(W, -0.25 * (grp.m + 2.0 * grp.k + 2.0 * s));
                         return std::make_pair(lhs, rhs);
                     }});

        v.push_back({{"YAMABE",
                      "L_s u_y = u_y^{(Q+2s)/(Q-2s)} for the extremal power function",
                      {"s", "y"},
                      {"family", "n", "m", "k", "z", "sigma"},
                      1e-3, false, make_spec(3e-6, 1e-15)},
                     [](Resolved& r, const QuadratureSpec& spec) {
                         const auto grp = resolve_group(r);
                         const auto g = resolve_point(r, grp);
                         const double s = r.scalar("s");
                         const double y = r.scalar("y");
                         const double Q = grp.m + 2.0 * grp.k;
                         const double gr = kernels::gamma_ratio(grp.m, grp.k, s);
                         const double kappa = std::pow(gr, (Q - 2.0 * s) / (4.0 * s));
                         const FracOrder plus(s, Sign::plus);
                         // u_y = kappa (16 y^2 / W)^{(Q-2s)/4}; reuse the conformal machinery
                         // through the closed-form normalization of the (+s) fundamental solution.
                         const double ca = fracops::conformal_apply(grp, s, g, y, spec);
                         const double lhs = kappa * std::pow(16.0 * y * y, 0.25 * (Q - 2.0 * s)) *
                                            std::pow(4.0 * kPi, 1.0 - s) /
                                            (gamma_fn(s) * kernels::const_C(grp.m, grp.k, plus)) * ca;
                         const double W = pole_gauge4(g.z.squaredNorm(), g.sigma.norm(), y);
                         const double u = kappa * std::pow(16.0 * y * y / W, 0.25 * (Q - 2.0 * s));
                         const double rhs = std::pow(u, (Q + 2.0 * s) / (Q - 2.0 * s));
                         return std::make_pair(lhs, rhs);
                     }});

        v.push_back({{"CHAPMAN",
                      "semigroup composition of the heat kernel under group convolution",
                      {"t", "tau"},
                      {"family", "n", "m", "k", "z", "sigma"},
                      5e-3, false, make_spec(1e-5, 1e-12)},
                     [](Resolved& r, const QuadratureSpec& spec) {
                         const auto grp = resolve_group(r);
                         const auto g = resolve_point(r, grp);
                         const double t = r.scalar("t");
                         const double tau = r.scalar("tau");
                         const double lhs = fracops::chapman_lhs(grp, g, t, tau, spec);
                         const double rhs = kernels::ghc_heat_kernel(grp, g, t + tau, spec.scaled_rel(0.1));
                         return std::make_pair(lhs, rhs);
                     }});

        v.push_back({{"MASS",
                      "stochastic completeness: the heat kernel integrates to 1 over the group",
                      {"t"},
                      {"family", "n", "m", "k"},
                      5e-3, false, make_spec(1e-5, 1e-12)},
                     [](Resolved& r, const QuadratureSpec& spec) {
                         const auto grp = resolve_group(r);
                         const double t = r.scalar("t");
                         const QuadratureSpec kspec = spec.scaled_rel(0.1);
                         auto radial = [&](double zn, double sn) {
                             return kernels::heat_kernel_radial(grp.m, grp.k, zn, sn, t, kspec);
                         };
                         const double Rz = fracops::scan_decay_radius(
                             [&](double r) { return radial(r, 0.0); }, spec.tail_cut, "MASS");
                         const double Rs = fracops::scan_decay_radius(
                             [&](double r) { return radial(0.0, r); }, spec.tail_cut, "MASS");
                         const RadialTable2D table(radial, 1.05 * Rz + 1.0, 1.05 * Rs + 1.0, 321, 321);
                         const double lhs = fracops::group_integral(
                             grp, [&](double zn, double sn) { return table(zn, sn); }, Rz, Rs, spec);
                         return std::make_pair(lhs, 1.0);
                     }});

        v.push_back({{"KNORM",
                      "unit mass of the thin-space kernel K_(-s)",
                      {"s", "t"},
                      {"family", "n", "m", "k"},
                      1e-4, false, make_spec(1e-6, 1e-13)},
                     [](Resolved& r, const QuadratureSpec& spec) {
                         const auto grp = resolve_group(r);
                         const double s = r.scalar("s");
                         const double t = r.scalar("t");
                         const QuadratureSpec kspec = spec.scaled_rel(0.1);
                         const double pref = std::pow(4.0 * kPi * t, 1.0 + s);
                         auto radial = [&](double zn, double sn) {
                             return pref * kernels::ext_q_radial(grp.m, grp.k, -s, zn, sn, t, 0.0, kspec);
                         };
                         const double Rz = fracops::scan_decay_radius(
                             [&](double r) { return radial(r, 0.0); }, spec.tail_cut, "KNORM");
                         const double Rs = fracops::scan_decay_radius(
                             [&](double r) { return radial(0.0, r); }, spec.tail_cut, "KNORM");
                         const RadialTable2D table(radial, 1.05 * Rz + 1.0, 1.05 * Rs + 1.0, 321, 321);
                         const double lhs = fracops::group_integral(
                             grp, [&](double zn, double sn) { return table(zn, sn); }, Rz, Rs, spec);
                         return std::make_pair(lhs, 1.0);
                     }});

        v.push_back({{"JGAUSS",
                      "J-phase Gaussian integral vs its factored form (empirical prefactor)",
                      {"t", "tau"},
                      {"family", "n", "m", "k", "lambda", "z"},
                      1e-6, false, make_spec(1e-9, 1e-15)},
                     [](Resolved& r, const QuadratureSpec& spec) {
                         const auto grp = resolve_group(r);
                         const double t = r.scalar("t");
                         const double tau = r.scalar("tau");
                         auto lam = r.vec("lambda", grp.k);
                         if (std::all_of(lam.begin(), lam.end(), [](double v) { return v == 0.0; }))
                             lam[0] = 1.0;
                         r.values["lambda"] = lam;
                         auto zv = r.vec("z", grp.m);
                         r.values["z"] = zv;
                         const Eigen::VectorXd lambda = Eigen::Map<const Eigen::VectorXd>(lam.data(), lam.size());
                         const Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(zv.data(), zv.size());
                         const auto jt = fracops::jtwisted_gaussian(grp, lambda, z, t, tau, spec);
                         return std::make_pair(jt.integral, jt.factored);
                     }});

        return v;
    }();
    return entries;
}

} // namespace

const std::vector<CheckDescriptor>& list_checks() {
    static const std::vector<CheckDescriptor> descs = [] {
        std::vector<CheckDescriptor> d;
        for (const auto& e : registry()) d.push_back(e.desc);
        return d;
    }();
    return descs;
}

const CheckDescriptor* find_check(const std::string& id) {
    std::string up = id;
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    for (const auto& d : list_checks())
        if (d.id == up) return &d;
    return nullptr;
}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

namespace {

std::string format_param(const ParamValue& v) {
    if (const double* d = std::get_if<double>(&v)) return format_double(*d);
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    const auto& vec = std::get<std::vector<double>>(v);
    std::string out;
    for (std::size_t i = 0; i < vec.size(); ++i) {
        if (i) out += ';';
        out += format_double(vec[i]);
    }
    return out;
}

} // namespace

CheckResult run_check(const std::string& id, const ParamMap& params,
                      const std::optional<QuadratureSpec>& spec_opt,
                      std::optional<double> tol_override) {
    const CheckDescriptor* desc = find_check(id);
    if (!desc)
        throw UsageError("unknown check id: " + id);

    const auto& entries = registry();
    const CheckEntry* entry = nullptr;
    for (const auto& e : entries)
        if (e.desc.id == desc->id) entry = &e;

    Resolved r{params};
    for (const auto& key : desc->required_params)
        if (!r.has(key))
            throw UsageError("check " + desc->id + ": missing parameter " + key);

    const QuadratureSpec spec = spec_opt.value_or(desc->default_spec);
    spec.validate();

    CheckResult res;
    res.check_id = desc->id;
    res.tol = tol_override.value_or(desc->default_tol);

    const auto t0 = std::chrono::steady_clock::now();
    try {
        auto [lhs, rhs] = entry->run(r, spec);
        res.lhs = lhs;
        res.rhs = rhs;
        res.abs_err = std::abs(lhs - rhs);
        res.rel_err = res.abs_err / std::max(std::abs(rhs), kRelEps);
        if (desc->abs_compare || rhs == 0.0)
            res.pass = res.abs_err <= res.tol;
        else
            res.pass = res.rel_err <= res.tol;
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& ex) {
        res.lhs = res.rhs = std::numeric_limits<double>::quiet_NaN();
        res.abs_err = res.rel_err = std::numeric_limits<double>::quiet_NaN();
        res.pass = false;
        res.note = ex.what();
    }
    res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    for (const auto& key : kParamOrder) {
        auto it = r.values.find(key);
        if (it != r.values.end())
            res.params.emplace_back(key, format_param(it->second));
    }
    return res;
}

std::string csv_header(const CheckResult& r) {
    std::string out = "check";
    for (const auto& [k, _] : r.params) out += ",param:" + k;
    out += ",lhs,rhs,abs_err,rel_err,tol,pass,runtime_s";
    return out;
}

std::string csv_row(const CheckResult& r) {
    std::string out = r.check_id;
    for (const auto& [_, v] : r.params) out += "," + v;
    out += "," + format_double(r.lhs);
    out += "," + format_double(r.rhs);
    out += "," + format_double(r.abs_err);
    out += "," + format_double(r.rel_err);
    out += "," + format_double(r.tol);
    out += r.pass ? ",true" : ",false";
    char buf[32];
    std::snprintf(buf, sizeof(buf), ",%.3f", r.runtime_s);
    out += buf;
    return out;
}

std::string to_json(const CheckResult& r, const QuadratureSpec& spec) {
    nlohmann::json j;
    j["check"] = r.check_id;
    nlohmann::json p = nlohmann::json::object();
    for (const auto& [k, v] : r.params) p[k] = v;
    j["params"] = p;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["abs_err"] = r.abs_err;
    j["rel_err"] = r.rel_err;
    j["tol"] = r.tol;
    j["pass"] = r.pass;
    j["runtime_s"] = r.runtime_s;
    j["quad_spec"] = {{"abs_tol", spec.abs_tol},
                      {"rel_tol", spec.rel_tol},
                      {"max_subdivisions", spec.max_subdivisions},
                      {"tail_cut", spec.tail_cut}};
    if (!r.note.empty()) j["note"] = r.note;
    return j.dump();
}

} // namespace confheat::verify
