#pragma once

#include "confheat/quad.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace confheat::verify {

using quad::QuadratureSpec;

/// Parameter values accepted by the checks: scalars, vectors, or names (family, sign).
using ParamValue = std::variant<double, std::vector<double>, std::string>;
using ParamMap = std::map<std::string, ParamValue>;

/// Missing or malformed parameters (maps to CLI exit code 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CheckResult {
    std::string check_id;
    std::vector<std::pair<std::string, std::string>> params; ///< canonical order, display form
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tol = 0.0;
    bool pass = false;
    double runtime_s = 0.0;
    std::string note; ///< error note when a check failed by exception
};

struct CheckDescriptor {
    std::string id;
    std::string summary;
    std::vector<std::string> required_params;
    std::vector<std::string> optional_params; ///< recognized, with built-in defaults
    double default_tol = 0.0;
    bool abs_compare = false; ///< compare by absolute instead of relative error
    QuadratureSpec default_spec;
};

/// The static check registry (14 identities), stable across runs.
const std::vector<CheckDescriptor>& list_checks();

/// Case-insensitive lookup; nullptr when unknown.
const CheckDescriptor* find_check(const std::string& id);

/// Runs a named check. Missing parameters raise UsageError; upstream evaluation
/// failures are reported as a failed CheckResult with a note, never thrown.
CheckResult run_check(const std::string& id, const ParamMap& params,
                      const std::optional<QuadratureSpec>& spec = {},
                      std::optional<double> tol_override = {});

/// CSV row format: check,param:...,lhs,rhs,abs_err,rel_err,tol,pass,runtime_s.
std::string csv_header(const CheckResult& r);
std::string csv_row(const CheckResult& r);

/// JSON object with the same fields plus the quadrature spec used.
std::string to_json(const CheckResult& r, const QuadratureSpec& spec);

/// Locale-independent shortest round-trip formatting of a double.
std::string format_double(double v);

} // namespace confheat::verify
