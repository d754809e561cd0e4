#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"

namespace qkzb::harness {

using nlohmann::json;

struct SuiteConfig {
    std::string suite;
    json parameters = json::object();
    std::map<std::string, double> tolerances;
    json quadrature = json::object();
    unsigned long seed = 1;
    double tolerance_scale = 1.0;
};

// rejects unknown keys and malformed values with Errc::invalid_config
SuiteConfig parse_config(const json& j);

struct CheckResult {
    std::string name;
    double residual = 0;
    double tolerance = 0;
    bool pass = false;
};

struct Report {
    std::string suite;
    std::string timestamp;
    json parameters;
    unsigned long seed = 1;
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;
    bool pass() const;
    int exit_code() const { return pass() ? 0 : 1; }
};

json to_json(const Report& r);
std::string dump(const Report& r);

std::vector<std::string> suite_names();
// names of the checks a suite runs, in report order
std::vector<std::string> check_names(const std::string& suite);
// throws unknown_suite or invalid_config
Report run_suite(const SuiteConfig& c);

std::vector<std::string> eval_targets();
// args: target-specific keys; complex values as numbers, [re, im] or strings like "0.2-0.1i"
cplx eval_value(const std::string& target, const json& args);
std::string format_complex(cplx z);
cplx parse_complex(const std::string& s);

// 0 ok, 1 failed checks, 2 configuration or usage errors
int exit_code_for(Errc e);

const char* build_timestamp();

}  // namespace qkzb::harness
