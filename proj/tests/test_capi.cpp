#include <doctest.h>

#include <cstring>
#include <string>

#include <json.hpp>

#include "qkzb/qkzb.h"

using nlohmann::json;

namespace {
struct Ctx {
    qkzb_context* p = nullptr;
    Ctx() { REQUIRE(qkzb_context_create(&p) == QKZB_OK); }
    ~Ctx() { qkzb_context_destroy(p); }
};

std::string take(char* s) {
    std::string r = s ? s : "";
    qkzb_string_free(s);
    return r;
}
}

TEST_CASE("listing") {
    Ctx c;
    char* s = nullptr;
    REQUIRE(qkzb_list_suites(c.p, &s) == QKZB_OK);
    auto suites = json::parse(take(s));
    CHECK(suites.size() == 9);
    REQUIRE(qkzb_list_checks(c.p, "hyperfun", &s) == QKZB_OK);
    CHECK(json::parse(take(s)).size() == 3);
    REQUIRE(qkzb_list_targets(c.p, &s) == QKZB_OK);
    CHECK(json::parse(take(s)).size() == 8);
    CHECK(qkzb_list_checks(c.p, "nope", &s) == QKZB_ERR_UNKNOWN_SUITE);
    CHECK(std::strlen(qkzb_last_error(c.p)) > 0);
}

TEST_CASE("running a suite") {
    Ctx c;
    char* rep = nullptr;
    int passed = -1;
    REQUIRE(qkzb_run_suite(c.p, R"({"suite": "gauss-sums"})", 1.0, &rep, &passed) == QKZB_OK);
    CHECK(passed == 1);
    CHECK(std::strlen(qkzb_last_error(c.p)) == 0);
    auto j = json::parse(take(rep));
    CHECK(j["suite"] == "gauss-sums");
    CHECK(j["timestamp"] == std::string(qkzb_build_timestamp()));

    REQUIRE(qkzb_run_suite(c.p, R"({"suite": "gauss-sums"})", 1e-30, &rep, &passed) == QKZB_OK);
    CHECK(passed == 0);
    qkzb_string_free(rep);

    qkzb_status s = qkzb_run_suite(c.p, R"({"suite": "nope"})", 1.0, &rep, &passed);
    CHECK(s == QKZB_ERR_UNKNOWN_SUITE);
    CHECK(qkzb_exit_code(s) == 2);
    CHECK(std::string(qkzb_status_name(s)) == "unknown_suite");
    CHECK(qkzb_run_suite(c.p, "{not json", 1.0, &rep, &passed) == QKZB_ERR_INVALID_CONFIG);
    CHECK(qkzb_run_suite(c.p, nullptr, 1.0, &rep, &passed) == QKZB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("evaluation") {
    Ctx c;
    double re = 0, im = 0;
    REQUIRE(qkzb_eval(c.p, "gauss", R"({"N": 4})", &re, &im) == QKZB_OK);
    char* s = nullptr;
    REQUIRE(qkzb_format_complex(re, im, &s) == QKZB_OK);
    CHECK(take(s) == "2-2i");
    CHECK(qkzb_eval(c.p, "theta", "{}", &re, &im) == QKZB_ERR_INVALID_CONFIG);
    CHECK(qkzb_eval(c.p, "theta", "[1]", &re, &im) == QKZB_ERR_INVALID_CONFIG);
    CHECK(qkzb_eval(c.p, "theta", R"({"t": 0.5, "tau": "0.1-0.2i"})", &re, &im) == QKZB_ERR_INVALID_CONFIG);
    CHECK(qkzb_eval(nullptr, "gauss", "{}", &re, &im) == QKZB_ERR_INVALID_ARGUMENT);
    CHECK(qkzb_exit_code(QKZB_ERR_POLE) == 1);
    CHECK(qkzb_exit_code(QKZB_OK) == 0);
    CHECK(std::string(qkzb_status_name(QKZB_ERR_INTERNAL)) == "internal");
}
