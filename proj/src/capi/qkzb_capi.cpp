#include "qkzb/qkzb.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "harness.hpp"

struct qkzb_context {
    std::string last_error;
};

namespace {

using qkzb::Errc;
using qkzb::harness::json;

qkzb_status to_status(Errc e) { return static_cast<qkzb_status>(static_cast<int>(e)); }

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

template <class F>
qkzb_status guarded(qkzb_context* ctx, F&& f) {
    if (!ctx) return QKZB_ERR_INVALID_ARGUMENT;
    ctx->last_error.clear();
    try {
        f();
        return QKZB_OK;
    } catch (const qkzb::Error& e) {
        ctx->last_error = e.what();
        return to_status(e.code());
    } catch (const json::exception& e) {
        ctx->last_error = std::string("malformed JSON: ") + e.what();
        return QKZB_ERR_INVALID_CONFIG;
    } catch (const std::bad_alloc&) {
        ctx->last_error = "out of memory";
        return QKZB_ERR_INTERNAL;
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        return QKZB_ERR_INTERNAL;
    }
}

qkzb_status need(qkzb_context* ctx, bool ok, const char* what) {
    if (ok) return QKZB_OK;
    if (ctx) ctx->last_error = what;
    return QKZB_ERR_INVALID_ARGUMENT;
}

template <class V>
qkzb_status list_out(qkzb_context* ctx, char** out, V&& values) {
    if (qkzb_status s = need(ctx, out != nullptr, "null output pointer")) return s;
    return guarded(ctx, [&] {
        *out = dup(json(values()).dump());
        if (!*out) throw std::bad_alloc();
    });
}

}  // namespace

extern "C" {

qkzb_status qkzb_context_create(qkzb_context** out) {
    if (!out) return QKZB_ERR_INVALID_ARGUMENT;
    *out = new (std::nothrow) qkzb_context();
    return *out ? QKZB_OK : QKZB_ERR_INTERNAL;
}

void qkzb_context_destroy(qkzb_context* ctx) { delete ctx; }

const char* qkzb_last_error(const qkzb_context* ctx) { return ctx ? ctx->last_error.c_str() : "null context"; }

const char* qkzb_status_name(qkzb_status s) {
    switch (s) {
    case QKZB_OK: return "ok";
    case QKZB_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case QKZB_ERR_INTERNAL: return "internal";
    default: break;
    }
    if (s > QKZB_OK && s <= QKZB_ERR_FUSION_SINGULAR) return qkzb::errc_name(static_cast<Errc>(s));
    return "unknown";
}

int qkzb_exit_code(qkzb_status s) {
    if (s == QKZB_OK) return 0;
    if (s == QKZB_ERR_INVALID_ARGUMENT) return 2;
    if (s > QKZB_OK && s <= QKZB_ERR_FUSION_SINGULAR) return qkzb::harness::exit_code_for(static_cast<Errc>(s));
    return 1;
}

const char* qkzb_build_timestamp(void) { return qkzb::harness::build_timestamp(); }

void qkzb_string_free(char* s) { std::free(s); }

qkzb_status qkzb_list_suites(qkzb_context* ctx, char** out_json) {
    return list_out(ctx, out_json, [] { return qkzb::harness::suite_names(); });
}

qkzb_status qkzb_list_checks(qkzb_context* ctx, const char* suite, char** out_json) {
    if (qkzb_status s = need(ctx, suite != nullptr, "null suite name")) return s;
    return list_out(ctx, out_json, [&] { return qkzb::harness::check_names(suite); });
}

qkzb_status qkzb_list_targets(qkzb_context* ctx, char** out_json) {
    return list_out(ctx, out_json, [] { return qkzb::harness::eval_targets(); });
}

qkzb_status qkzb_run_suite(qkzb_context* ctx, const char* config_json, double tolerance_scale, char** out_report,
                           int* out_passed) {
    if (qkzb_status s = need(ctx, config_json && out_report && out_passed, "null argument")) return s;
    return guarded(ctx, [&] {
        auto cfg = qkzb::harness::parse_config(json::parse(config_json));
        cfg.tolerance_scale = tolerance_scale;
        auto rep = qkzb::harness::run_suite(cfg);
        *out_report = dup(qkzb::harness::dump(rep));
        if (!*out_report) throw std::bad_alloc();
        *out_passed = rep.pass() ? 1 : 0;
    });
}

qkzb_status qkzb_eval(qkzb_context* ctx, const char* target, const char* args_json, double* out_re, double* out_im) {
    if (qkzb_status s = need(ctx, target && out_re && out_im, "null argument")) return s;
    return guarded(ctx, [&] {
        json args = args_json && *args_json ? json::parse(args_json) : json::object();
        if (!args.is_object()) throw qkzb::Error(Errc::invalid_config, "eval arguments must be a JSON object");
        qkzb::cplx z = qkzb::harness::eval_value(target, args);
        *out_re = z.real();
        *out_im = z.imag();
    });
}

qkzb_status qkzb_format_complex(double re, double im, char** out) {
    if (!out) return QKZB_ERR_INVALID_ARGUMENT;
    *out = dup(qkzb::harness::format_complex({re, im}));
    return *out ? QKZB_OK : QKZB_ERR_INTERNAL;
}

}  // extern "C"
