#include <doctest.h>

#include "harness.hpp"

using namespace qkzb;
using namespace qkzb::harness;

namespace {
Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::domain;
}
}

TEST_CASE("config parsing") {
    auto c = parse_config(json{{"suite", "rmatrix"}, {"seed", 7}, {"tolerances", {{"unitarity_and_dybe", 1e-8}}}});
    CHECK(c.suite == "rmatrix");
    CHECK(c.seed == 7);
    CHECK(c.tolerances.at("unitarity_and_dybe") == 1e-8);
    CHECK(code_of([] { parse_config(json{{"suite", "rmatrix"}, {"bogus", 1}}); }) == Errc::invalid_config);
    CHECK(code_of([] { parse_config(json{{"suite", 3}}); }) == Errc::invalid_config);
    CHECK(code_of([] { parse_config(json::array()); }) == Errc::invalid_config);
}

TEST_CASE("suites and their checks") {
    std::map<std::string, size_t> expect{{"gauss-sums", 1}, {"elliptic-core", 5}, {"weight-modules", 3},
                                         {"rmatrix", 4},    {"qkzb-ops", 4},      {"hyperfun", 3},
                                         {"shapovalov-heat", 4}, {"blocks", 3},   {"semiclassical", 2}};
    auto names = suite_names();
    CHECK(names.size() == expect.size());
    for (const auto& n : names) CHECK(check_names(n).size() == expect.at(n));
    CHECK(code_of([] { check_names("nope"); }) == Errc::unknown_suite);
    SuiteConfig c;
    c.suite = "nope";
    CHECK(code_of([&] { run_suite(c); }) == Errc::unknown_suite);
    CHECK(exit_code_for(Errc::unknown_suite) == 2);
    CHECK(exit_code_for(Errc::invalid_config) == 2);
    CHECK(exit_code_for(Errc::pole) == 1);
}

TEST_CASE("reports are deterministic") {
    SuiteConfig c;
    c.suite = "rmatrix";
    c.seed = 7;
    auto a = run_suite(c), b = run_suite(c);
    CHECK(a.pass());
    CHECK(a.exit_code() == 0);
    CHECK(dump(a) == dump(b));
    auto j = to_json(a);
    CHECK(j["suite"] == "rmatrix");
    CHECK(j["seed"] == 7);
    CHECK(j["timestamp"] == std::string(build_timestamp()));
    CHECK(j["checks"].size() == 4);
}

TEST_CASE("tolerance overrides and scaling") {
    SuiteConfig c = parse_config(json{{"suite", "gauss-sums"}, {"tolerances", {{"closed_form", 1e-30}}}});
    auto r = run_suite(c);
    CHECK_FALSE(r.pass());
    CHECK(r.exit_code() == 1);
    c.tolerance_scale = 1e20;
    CHECK(run_suite(c).pass());
    CHECK(code_of([] { run_suite(parse_config(json{{"suite", "gauss-sums"}, {"tolerances", {{"nope", 1.0}}}})); }) ==
          Errc::invalid_config);
    CHECK(code_of([] { run_suite(parse_config(json{{"suite", "gauss-sums"}, {"parameters", {{"nope", 1.0}}}})); }) ==
          Errc::invalid_config);
}

TEST_CASE("single evaluations") {
    CHECK(format_complex(eval_value("gauss", json{{"N", 4}})) == "2-2i");
    CHECK(format_complex(eval_value("omega", json{{"a", 0}})) == "1+0i");
    CHECK(std::abs(eval_value("theta", json{{"t", 0}})) < 1e-15);
    CHECK(std::abs(eval_value("theta", json{{"t", "0.3+0.1i"}})) > 0.1);
    CHECK(code_of([] { eval_value("theta", json::object()); }) == Errc::invalid_config);
    CHECK(code_of([] { eval_value("nope", json::object()); }) == Errc::invalid_config);
    CHECK(eval_targets().size() == 8);
}

TEST_CASE("complex parsing and formatting") {
    CHECK(parse_complex("0.2+0.1i") == cplx(0.2, 0.1));
    CHECK(parse_complex("-3") == cplx(-3, 0));
    CHECK(parse_complex("i") == cplx(0, 1));
    CHECK(parse_complex("-i") == cplx(0, -1));
    CHECK(parse_complex("2.5e-3-4i") == cplx(2.5e-3, -4));
    CHECK(parse_complex("1+i") == cplx(1, 1));
    CHECK_THROWS_AS(parse_complex("x"), Error);
    CHECK(format_complex({-0.0, -0.0}) == "0+0i");
    CHECK(format_complex({0.5, -0.25}) == "0.5-0.25i");
}
