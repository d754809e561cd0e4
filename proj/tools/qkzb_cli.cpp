#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qkzb/qkzb.h"

using nlohmann::json;

namespace {

struct Ctx {
    qkzb_context* p = nullptr;
    Ctx() {
        if (qkzb_context_create(&p) != QKZB_OK) throw std::runtime_error("cannot create context");
    }
    ~Ctx() { qkzb_context_destroy(p); }
};

struct Str {
    char* s = nullptr;
    ~Str() { qkzb_string_free(s); }
    std::string get() const { return s ? s : ""; }
};

int fail(const Ctx& c, qkzb_status s) {
    std::cerr << "qkzb: " << qkzb_status_name(s) << ": " << qkzb_last_error(c.p) << "\n";
    return qkzb_exit_code(s);
}

bool load_json(const std::string& path, json& out) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "qkzb: cannot open config '" << path << "'\n";
        return false;
    }
    try {
        out = json::parse(in);
    } catch (const json::exception& e) {
        std::cerr << "qkzb: config '" << path << "': " << e.what() << "\n";
        return false;
    }
    return true;
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        std::cerr << "qkzb: cannot write '" << path << "'\n";
        return false;
    }
    return true;
}

int cmd_list(const Ctx& c) {
    Str suites, targets;
    if (auto s = qkzb_list_suites(c.p, &suites.s)) return fail(c, s);
    if (auto s = qkzb_list_targets(c.p, &targets.s)) return fail(c, s);
    std::cout << "suites:\n";
    for (const auto& name : json::parse(suites.get())) {
        Str checks;
        std::string n = name.get<std::string>();
        if (auto s = qkzb_list_checks(c.p, n.c_str(), &checks.s)) return fail(c, s);
        std::cout << "  " << n << "\n";
        for (const auto& ch : json::parse(checks.get())) std::cout << "    " << ch.get<std::string>() << "\n";
    }
    std::cout << "eval targets:\n";
    for (const auto& t : json::parse(targets.get())) std::cout << "  " << t.get<std::string>() << "\n";
    return 0;
}

struct VerifyArgs {
    std::string suite, config, out;
    long long seed = -1;
    double scale = 1.0;
};

int cmd_verify(const Ctx& c, const VerifyArgs& a) {
    json cfg = json::object();
    if (!a.config.empty() && !load_json(a.config, cfg)) return 2;
    if (!cfg.is_object()) {
        std::cerr << "qkzb: config must be a JSON object\n";
        return 2;
    }
    if (!a.suite.empty()) cfg["suite"] = a.suite;
    if (!cfg.contains("suite")) {
        std::cerr << "qkzb: no suite given\n";
        return 2;
    }
    if (a.seed >= 0) cfg["seed"] = a.seed;
    Str rep;
    int passed = 0;
    if (auto s = qkzb_run_suite(c.p, cfg.dump().c_str(), a.scale, &rep.s, &passed)) return fail(c, s);
    json r = json::parse(rep.get());
    for (const auto& ch : r["checks"]) {
        char line[256];
        std::snprintf(line, sizeof line, "%s  %-40s residual %.3e  tolerance %.1e\n", ch["pass"].get<bool>() ? "PASS" : "FAIL",
                      ch["name"].get<std::string>().c_str(),
                      ch["residual"].is_number() ? ch["residual"].get<double>() : INFINITY, ch["tolerance"].get<double>());
        std::cout << line;
    }
    std::string out = a.out.empty() ? "qkzb-" + r["suite"].get<std::string>() + ".json" : a.out;
    if (!write_file(out, rep.get())) return 2;
    std::cout << r["suite"].get<std::string>() << ": " << r["status"].get<std::string>() << " (report " << out << ")\n";
    return passed ? 0 : 1;
}

struct EvalArgs {
    std::string target, config, out;
    std::vector<std::string> kv;
};

int cmd_eval(const Ctx& c, const EvalArgs& a) {
    json args = json::object();
    if (!a.config.empty()) {
        json cfg;
        if (!load_json(a.config, cfg)) return 2;
        if (cfg.contains("parameters")) args = cfg["parameters"];
    }
    for (const auto& s : a.kv) {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "qkzb: expected key=value, got '" << s << "'\n";
            return 2;
        }
        std::string k = s.substr(0, eq), v = s.substr(eq + 1);
        json val = json::parse(v, nullptr, false);
        args[k] = val.is_discarded() || val.is_string() ? json(v) : val;
    }
    double re = 0, im = 0;
    if (auto s = qkzb_eval(c.p, a.target.c_str(), args.dump().c_str(), &re, &im)) return fail(c, s);
    Str txt;
    qkzb_format_complex(re, im, &txt.s);
    json j = {{"target", a.target}, {"arguments", args}, {"value", {re, im}}};
    std::cout << txt.get() << "\n" << j.dump() << "\n";
    if (!a.out.empty() && !write_file(a.out, j.dump(2) + "\n")) return 2;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qkzb: checks and evaluations for the q-deformed KZB heat equation"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list suites, their checks and eval targets");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", va.suite, "suite name");
    verify->add_option("--config", va.config, "JSON config file");
    verify->add_option("--out", va.out, "report path (default qkzb-<suite>.json)");
    verify->add_option("--seed", va.seed, "seed for generic draws")->check(CLI::NonNegativeNumber);
    verify->add_option("--tolerance-scale", va.scale, "multiply every tolerance")->check(CLI::PositiveNumber);

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "evaluate a single value");
    eval->add_option("target", ea.target, "theta, omega, u, Q, V, M, theta_level or gauss")->required();
    eval->add_option("args", ea.kv, "key=value arguments");
    eval->add_option("--config", ea.config, "JSON file whose 'parameters' supply arguments");
    eval->add_option("--out", ea.out, "write the JSON value here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Ctx c;
        if (*list) return cmd_list(c);
        if (*verify) return cmd_verify(c, va);
        if (*eval) return cmd_eval(c, ea);
    } catch (const std::exception& e) {
        std::cerr << "qkzb: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
