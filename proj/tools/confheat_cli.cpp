#include "confheat/kernels.hpp"
#include "confheat/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace {

using confheat::verify::ParamMap;
using confheat::verify::ParamValue;
using confheat::verify::UsageError;

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("malformed number list: " + text);
        }
    }
    if (out.empty())
        throw UsageError("empty number list");
    return out;
}

struct SweepAxis {
    std::string key;
    std::vector<double> values;
};

SweepAxis parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw UsageError("malformed sweep (expected key=start:stop:step): " + text);
    SweepAxis axis;
    axis.key = text.substr(0, eq);
    const std::string range = text.substr(eq + 1);
    std::vector<double> parts;
    std::stringstream ss(range);
    std::string item;
    while (std::getline(ss, item, ':'))
        parts.push_back(std::stod(item));
    if (parts.size() != 3)
        throw UsageError("malformed sweep range (expected start:stop:step): " + range);
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(step > 0.0))
        throw UsageError("sweep step must be positive");
    if (stop < start - 1e-12)
        throw UsageError("empty sweep range");
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i)
        axis.values.push_back(start + i * step);
    return axis;
}

struct CommonFlags {
    std::optional<double> n, m, k, s, y, t, tau, B, mu, rho;
    std::string z, sigma, lambda, family, sign;
    std::optional<double> tol, quad_rel, quad_abs;
    std::optional<int> quad_maxsub;

    void attach(CLI::App* cmd) {
        auto add_num = [&](const char* flag, std::optional<double>& slot, const char* help) {
            cmd->add_option(flag, slot, help);
        };
        add_num("--n", n, "Euclidean dimension / family index");
        add_num("--m", m, "horizontal dimension");
        add_num("--k", k, "vertical dimension");
        add_num("--s", s, "fractional order in (0,1)");
        add_num("--y", y, "extension variable");
        add_num("--t", t, "time");
        add_num("--tau", tau, "second time");
        add_num("--B", B, "lemma parameter B");
        add_num("--mu", mu, "lemma parameter mu");
        add_num("--rho", rho, "h-function argument rho");
        cmd->add_option("--z", z, "horizontal coordinates, comma-separated");
        cmd->add_option("--sigma", sigma, "vertical coordinates, comma-separated");
        cmd->add_option("--lambda", lambda, "frequency vector, comma-separated");
        cmd->add_option("--family", family, "group family: heisenberg | quaternionic");
        cmd->add_option("--sign", sign, "kernel family sign: plus | minus");
        cmd->add_option("--tol", tol, "check tolerance override");
        cmd->add_option("--quad-rel-tol", quad_rel, "quadrature relative tolerance");
        cmd->add_option("--quad-abs-tol", quad_abs, "quadrature absolute tolerance");
        cmd->add_option("--quad-max-subdivisions", quad_maxsub, "quadrature subdivision budget");
    }

    ParamMap params() const {
        ParamMap p;
        auto put = [&](const char* key, const std::optional<double>& v) {
            if (v) p[key] = *v;
        };
        put("n", n); put("m", m); put("k", k); put("s", s); put("y", y);
        put("t", t); put("tau", tau); put("B", B); put("mu", mu); put("rho", rho);
        if (!z.empty()) p["z"] = parse_list(z);
        if (!sigma.empty()) p["sigma"] = parse_list(sigma);
        if (!lambda.empty()) p["lambda"] = parse_list(lambda);
        if (!family.empty()) p["family"] = family;
        if (!sign.empty()) p["sign"] = sign;
        return p;
    }

    std::optional<confheat::quad::QuadratureSpec> quad_spec(const confheat::quad::QuadratureSpec& base) const {
        if (!quad_rel && !quad_abs && !quad_maxsub) return std::nullopt;
        confheat::quad::QuadratureSpec spec = base;
        if (quad_rel) spec.rel_tol = *quad_rel;
        if (quad_abs) spec.abs_tol = *quad_abs;
        if (quad_maxsub) spec.max_subdivisions = *quad_maxsub;
        return spec;
    }
};

std::string format15(double v) {
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

int cmd_verify(const std::string& check, const CommonFlags& flags, bool json) {
    const auto* desc = confheat::verify::find_check(check);
    if (!desc) {
        std::cerr << "unknown check id: " << check << "\nvalid ids:";
        for (const auto& d : confheat::verify::list_checks())
            std::cerr << " " << d.id;
        std::cerr << "\n";
        return 2;
    }
    const auto spec_override = flags.quad_spec(desc->default_spec);
    const auto result = confheat::verify::run_check(desc->id, flags.params(), spec_override, flags.tol);
    const auto used_spec = spec_override.value_or(desc->default_spec);
    if (json) {
        std::cout << confheat::verify::to_json(result, used_spec) << "\n";
    } else {
        std::cout << confheat::verify::csv_header(result) << "\n"
                  << confheat::verify::csv_row(result) << "\n";
    }
    return result.pass ? 0 : 1;
}

int cmd_table(const std::string& check, const std::vector<std::string>& sweeps,
              const std::string& out_path, const CommonFlags& flags) {
    const auto* desc = confheat::verify::find_check(check);
    if (!desc) {
        std::cerr << "unknown check id: " << check << "\n";
        return 2;
    }
    std::vector<SweepAxis> axes;
    for (const auto& s : sweeps)
        axes.push_back(parse_sweep(s));
    if (axes.empty())
        throw UsageError("table requires at least one --sweep");

    std::size_t total = 1;
    for (const auto& a : axes) total *= a.values.size();

    const ParamMap base = flags.params();
    const auto spec_override = flags.quad_spec(desc->default_spec);

    auto params_for = [&](std::size_t index) {
        ParamMap p = base;
        std::size_t rest = index;
        for (std::size_t a = axes.size(); a-- > 0;) {
            const auto& axis = axes[a];
            p[axis.key] = axis.values[rest % axis.values.size()];
            rest /= axis.values.size();
        }
        return p;
    };

    // combinations are independent and pure; run them across threads, collect by index
    std::vector<confheat::verify::CheckResult> results(total);
    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), total));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= total) break;
                try {
                    results[i] = confheat::verify::run_check(desc->id, params_for(i), spec_override, flags.tol);
                } catch (...) {
                    std::scoped_lock lk(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    std::ofstream out(out_path);
    if (!out)
        return 2;
    out << confheat::verify::csv_header(results[0]) << "\n";
    bool all_pass = true;
    for (const auto& r : results) {
        out << confheat::verify::csv_row(r) << "\n";
        all_pass = all_pass && r.pass;
    }
    if (!out.good())
        return 2;
    return all_pass ? 0 : 1;
}

int cmd_eval(const std::string& kernel, const CommonFlags& flags) {
    using namespace confheat;
    using kernels::FracOrder;
    using kernels::Sign;

    const ParamMap p = flags.params();
    confheat::verify::ParamMap dummy;

    auto get = [&](const char* key, std::optional<double> fallback = {}) -> double {
        auto it = p.find(key);
        if (it == p.end()) {
            if (fallback) return *fallback;
            throw UsageError(std::string("eval: missing parameter --") + key);
        }
        if (const double* d = std::get_if<double>(&it->second)) return *d;
        throw UsageError(std::string("eval: parameter must be scalar: ") + key);
    };
    auto get_vec = [&](const char* key, int len) -> std::vector<double> {
        auto it = p.find(key);
        if (it == p.end()) return std::vector<double>(len, 0.0);
        if (const auto* v = std::get_if<std::vector<double>>(&it->second)) {
            if (static_cast<int>(v->size()) != len)
                throw UsageError(std::string("eval: wrong vector length for ") + key);
            return *v;
        }
        if (const double* d = std::get_if<double>(&it->second)) {
            if (len != 1) throw UsageError(std::string("eval: wrong vector length for ") + key);
            return {*d};
        }
        throw UsageError(std::string("eval: parameter must be numeric: ") + key);
    };
    auto sign_of = [&]() {
        auto it = p.find("sign");
        if (it == p.end()) return Sign::plus;
        const std::string s = std::get<std::string>(it->second);
        if (s == "plus" || s == "+") return Sign::plus;
        if (s == "minus" || s == "-") return Sign::minus;
        throw UsageError("eval: sign must be plus or minus");
    };
    auto group_of = [&]() {
        const int m = static_cast<int>(get("m", 2.0));
        const int k = static_cast<int>(get("k", 1.0));
        if (k == 1 && m % 2 == 0 && m >= 2) return build_standard(StandardFamily::heisenberg, m / 2);
        if (k == 3 && m % 4 == 0 && m >= 4) return build_standard(StandardFamily::quaternionic, m / 4);
        throw UsageError("eval: no standard family with m=" + std::to_string(m) + ", k=" + std::to_string(k));
    };
    auto point_of = [&](const HTypeStructure& grp) {
        GroupPoint g;
        const auto z = get_vec("z", grp.m);
        const auto sg = get_vec("sigma", grp.k);
        g.z = Eigen::Map<const Eigen::VectorXd>(z.data(), z.size());
        g.sigma = Eigen::Map<const Eigen::VectorXd>(sg.data(), sg.size());
        return g;
    };

    double value = 0.0;
    if (kernel == "euclid_ext") {
        const int n = static_cast<int>(get("n"));
        const auto x = get_vec("z", n);
        value = kernels::euclid_ext_kernel(n, FracOrder(get("s"), sign_of()), x, get("y", 0.0), get("t"));
    } else if (kernel == "euclid_fundsol") {
        const int n = static_cast<int>(get("n"));
        const auto x = get_vec("z", n);
        value = kernels::euclid_fundsol(n, FracOrder(get("s"), sign_of()), x, get("y", 0.0));
    } else if (kernel == "ghc") {
        const auto grp = group_of();
        value = kernels::ghc_heat_kernel(grp, point_of(grp), get("t"));
    } else if (kernel == "ext_q") {
        const auto grp = group_of();
        value = kernels::ext_kernel_q(grp, FracOrder(get("s"), sign_of()), point_of(grp), get("t"),
                                      get("y", 0.0));
    } else if (kernel == "thin_k") {
        const auto grp = group_of();
        value = kernels::thin_kernel_K(grp, FracOrder(get("s"), sign_of()), point_of(grp), get("t"));
    } else if (kernel == "fundsol") {
        const auto grp = group_of();
        value = kernels::fundsol_closed(grp, FracOrder(get("s"), sign_of()), point_of(grp), get("y", 0.0));
    } else if (kernel == "const_c") {
        value = kernels::const_C(static_cast<int>(get("m")), static_cast<int>(get("k")),
                                 FracOrder(get("s"), sign_of()));
    } else if (kernel == "gamma_ratio") {
        value = kernels::gamma_ratio(static_cast<int>(get("m")), static_cast<int>(get("k")), get("s"));
    } else {
        std::cerr << "unknown kernel: " << kernel
                  << "\nvalid kernels: euclid_ext euclid_fundsol ghc ext_q thin_k fundsol const_c gamma_ratio\n";
        return 2;
    }
    std::cout << format15(value) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical kernels and intertwining identity checks on Heisenberg-type groups"};
    app.require_subcommand(1);
    app.set_config("--config")->description("read key=value flags from a file");

    std::string check_id, kernel_name, out_path;
    std::vector<std::string> sweeps;
    bool json = false;

    CLI::App* verify = app.add_subcommand("verify", "run one identity check");
    verify->set_config("--config");
    verify->add_option("--check", check_id, "check id")->required();
    verify->add_flag("--json", json, "emit JSON instead of CSV");
    CommonFlags vflags;
    vflags.attach(verify);

    CLI::App* table = app.add_subcommand("table", "sweep a check over parameter grids, write CSV");
    table->set_config("--config");
    table->add_option("--check", check_id, "check id")->required();
    table->add_option("--sweep", sweeps, "key=start:stop:step (repeatable)");
    table->add_option("--out", out_path, "output CSV path")->required();
    CommonFlags tflags;
    tflags.attach(table);

    CLI::App* eval = app.add_subcommand("eval", "evaluate a kernel at a point");
    eval->set_config("--config");
    eval->add_option("--kernel", kernel_name, "kernel name")->required();
    CommonFlags eflags;
    eflags.attach(eval);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed())
            return cmd_verify(check_id, vflags, json);
        if (table->parsed())
            return cmd_table(check_id, sweeps, out_path, tflags);
        if (eval->parsed())
            return cmd_eval(kernel_name, eflags);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
