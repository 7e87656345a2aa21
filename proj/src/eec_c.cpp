#include "eec/eec.h"

#include "eec/commands.hpp"
#include "eec/config.hpp"
#include "eec/errors.hpp"
#include "eec/matrixcalc.hpp"

#include <cstring>
#include <fstream>
#include <iostream>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

struct eec_config {
    eec::RunConfig value;
};

struct eec_verify_report {
    eec::VerifyOutcome value;
};

struct eec_problem {
    struct Rect {
        eec::StationaryModel model;
        eec::MeanFunction mean;
        eec::Rectangle t;
    };
    struct Sphere {
        eec::SchoenbergModel model;
        eec::ChartMean mean;
    };
    std::variant<Rect, Sphere> value;
    eec::RunConfig config;
};

namespace {

struct LastError {
    std::string message;
    std::string field;
    int line = 0;
};

thread_local LastError last_error;

eec_status fail(eec_status status, std::string message, std::string field = {}, int line = 0)
{
    last_error = {std::move(message), std::move(field), line};
    return status;
}

// Runs body and translates exceptions into status codes.
template <class Body>
eec_status guarded(Body&& body)
{
    try {
        return body();
    }
    catch (const eec::ConfigError& e) {
        return fail(EEC_ERR_CONFIG, e.what(), e.field(), e.line());
    }
    catch (const eec::DomainError& e) {
        return fail(EEC_ERR_DOMAIN, e.what());
    }
    catch (const eec::SingularityError& e) {
        return fail(EEC_ERR_SINGULAR, e.what());
    }
    catch (const eec::ModelError& e) {
        return fail(EEC_ERR_MODEL, e.what());
    }
    catch (const eec::NumericError& e) {
        return fail(EEC_ERR_NUMERIC, e.what());
    }
    catch (const eec::IoError& e) {
        return fail(EEC_ERR_IO, e.what());
    }
    catch (const std::bad_alloc&) {
        return fail(EEC_ERR_INTERNAL, "out of memory");
    }
    catch (const std::exception& e) {
        return fail(EEC_ERR_INTERNAL, e.what());
    }
    catch (...) {
        return fail(EEC_ERR_INTERNAL, "unknown exception");
    }
}

eec_status null_arg(const char* what) { return fail(EEC_ERR_INVALID_ARG, std::string(what) + " is NULL"); }

template <class Write>
eec_status to_sink(const char* out_path, Write&& write)
{
    if (out_path == nullptr || *out_path == '\0') {
        write(std::cout);
        std::cout.flush();
        return std::cout ? EEC_OK : fail(EEC_ERR_IO, "cannot write to standard output");
    }
    std::ofstream out(out_path);
    if (!out)
        return fail(EEC_ERR_IO, std::string("cannot open '") + out_path + "' for writing");
    write(out);
    out.flush();
    return out ? EEC_OK : fail(EEC_ERR_IO, std::string("write to '") + out_path + "' failed");
}

eec_status sym_from(const double* b, int n, eec::SymMatrix& out)
{
    if (b == nullptr)
        return null_arg("matrix");
    if (n < 1)
        return fail(EEC_ERR_INVALID_ARG, "matrix size must be positive");
    out = eec::SymMatrix::from_dense(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(b, n, n));
    return EEC_OK;
}

}  // namespace

extern "C" {

const char* eec_status_name(eec_status status)
{
    switch (status) {
    case EEC_OK: return "ok";
    case EEC_ERR_DOMAIN: return "domain error";
    case EEC_ERR_SINGULAR: return "singular matrix";
    case EEC_ERR_MODEL: return "model error";
    case EEC_ERR_CONFIG: return "config error";
    case EEC_ERR_NUMERIC: return "numeric error";
    case EEC_ERR_VERIFY_FAILED: return "verification failed";
    case EEC_ERR_IO: return "i/o error";
    case EEC_ERR_INVALID_ARG: return "invalid argument";
    case EEC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* eec_last_error(void) { return last_error.message.c_str(); }
int eec_last_error_line(void) { return last_error.line; }
const char* eec_last_error_field(void) { return last_error.field.c_str(); }

eec_status eec_config_load(const char* path, eec_config** out)
{
    if (path == nullptr || out == nullptr)
        return null_arg(path ? "out" : "path");
    *out = nullptr;
    return guarded([&] {
        *out = new eec_config{eec::load_config(path)};
        return EEC_OK;
    });
}

eec_status eec_config_parse(const char* text, eec_config** out)
{
    if (text == nullptr || out == nullptr)
        return null_arg(text ? "out" : "text");
    *out = nullptr;
    return guarded([&] {
        *out = new eec_config{eec::parse_config(text)};
        return EEC_OK;
    });
}

void eec_config_free(eec_config* config) { delete config; }

eec_status eec_config_serialize(const eec_config* config, char** text)
{
    if (config == nullptr || text == nullptr)
        return null_arg(config ? "text" : "config");
    *text = nullptr;
    return guarded([&] {
        const std::string s = eec::serialize_config(config->value);
        *text = new char[s.size() + 1];
        std::memcpy(*text, s.c_str(), s.size() + 1);
        return EEC_OK;
    });
}

void eec_string_free(char* text) { delete[] text; }

const char* eec_config_output_path(const eec_config* config)
{
    return config ? config->value.output_path.c_str() : "";
}

int eec_config_equal(const eec_config* a, const eec_config* b)
{
    return a != nullptr && b != nullptr && a->value == b->value;
}

eec_status eec_run_eec(const eec_config* config, const char* out_path)
{
    if (config == nullptr)
        return null_arg("config");
    return guarded([&] {
        // Evaluate fully before touching the sink so failures leave no partial file.
        std::ostringstream csv;
        eec::write_eec_csv(config->value, csv);
        return to_sink(out_path, [&](std::ostream& os) { os << csv.str(); });
    });
}

eec_status eec_run_asymptotic(const eec_config* config, const char* out_path)
{
    if (config == nullptr)
        return null_arg("config");
    return guarded([&] {
        std::ostringstream csv;
        eec::write_asymptotic_csv(config->value, csv);
        return to_sink(out_path, [&](std::ostream& os) { os << csv.str(); });
    });
}

eec_status eec_run_verify(const eec_config* config, const eec_verify_options* options, eec_verify_report** out)
{
    if (config == nullptr || out == nullptr)
        return null_arg(config ? "out" : "config");
    *out = nullptr;
    return guarded([&] {
        eec::VerifyOptions opts;
        if (options != nullptr) {
            if (options->use_seed)
                opts.seed = options->seed;
            opts.run_mc = options->run_mc != 0;
        }
        *out = new eec_verify_report{eec::run_verify(config->value, opts)};
        if ((*out)->value.passed())
            return EEC_OK;
        std::string failed;
        for (const eec::Check& c : (*out)->value.checks)
            if (!c.passed)
                failed += (failed.empty() ? "" : ", ") + c.name;
        return fail(EEC_ERR_VERIFY_FAILED, "failed checks: " + failed);
    });
}

size_t eec_verify_report_count(const eec_verify_report* report) { return report ? report->value.checks.size() : 0; }

eec_status eec_verify_report_check(const eec_verify_report* report, size_t index, const char** name, int* passed,
                                   const char** detail)
{
    if (report == nullptr)
        return null_arg("report");
    if (index >= report->value.checks.size())
        return fail(EEC_ERR_INVALID_ARG, "check index out of range");
    const eec::Check& c = report->value.checks[index];
    if (name)
        *name = c.name.c_str();
    if (passed)
        *passed = c.passed ? 1 : 0;
    if (detail)
        *detail = c.detail.c_str();
    return EEC_OK;
}

void eec_verify_report_free(eec_verify_report* report) { delete report; }

eec_status eec_problem_create(const eec_config* config, eec_problem** out)
{
    if (config == nullptr || out == nullptr)
        return null_arg(config ? "out" : "config");
    *out = nullptr;
    return guarded([&] {
        const eec::RunConfig& c = config->value;
        if (c.domain == eec::DomainKind::Rectangle)
            *out = new eec_problem{
                eec_problem::Rect{eec::build_stationary(c), eec::build_mean(c), eec::build_rectangle(c)}, c};
        else
            *out = new eec_problem{eec_problem::Sphere{eec::build_schoenberg(c), eec::ChartMean(eec::build_mean(c))}, c};
        return EEC_OK;
    });
}

void eec_problem_free(eec_problem* problem) { delete problem; }

eec_status eec_problem_eec(const eec_problem* problem, double u, double* total, double* tail_bound)
{
    if (problem == nullptr || total == nullptr)
        return null_arg(problem ? "total" : "problem");
    return guarded([&] {
        const eec::RunConfig& c = problem->config;
        if (const auto* r = std::get_if<eec_problem::Rect>(&problem->value)) {
            const eec::EecReport rep = eec::expected_euler_rect(r->model, r->mean, r->t, u, c.quadrature, c.bracket);
            *total = rep.total;
            if (tail_bound)
                *tail_bound = rep.tail_bound;
        }
        else {
            const auto& s = std::get<eec_problem::Sphere>(problem->value);
            const eec::SphereReport rep =
                eec::expected_euler_sphere(s.model, s.mean, u, c.sphere_quadrature, c.bracket, c.sphere_derivatives);
            *total = rep.total;
            if (tail_bound)
                *tail_bound = rep.tail_bound;
        }
        return EEC_OK;
    });
}

eec_status eec_problem_laplace(const eec_problem* problem, double u, double* value)
{
    if (problem == nullptr || value == nullptr)
        return null_arg(problem ? "value" : "problem");
    const auto* r = std::get_if<eec_problem::Rect>(&problem->value);
    if (r == nullptr)
        return fail(EEC_ERR_DOMAIN, "the Laplace asymptotic is available for rectangles only");
    return guarded([&] {
        *value = eec::laplace_asymptotic(r->model, r->mean, r->t, u);
        return EEC_OK;
    });
}

eec_status eec_hermite(int n, double x, double* out)
{
    if (out == nullptr)
        return null_arg("out");
    return guarded([&] {
        *out = eec::hermite(n, x);
        return EEC_OK;
    });
}

eec_status eec_gaussian_tail(double x, double* out)
{
    if (out == nullptr)
        return null_arg("out");
    return guarded([&] {
        *out = eec::gaussian_tail(x);
        return EEC_OK;
    });
}

eec_status eec_gegenbauer(int n, double lambda, double x, double* out)
{
    if (out == nullptr)
        return null_arg("out");
    return guarded([&] {
        *out = eec::gegenbauer(n, lambda, x);
        return EEC_OK;
    });
}

eec_status eec_minor_sum(const double* b, int n, int j, double* out)
{
    if (out == nullptr)
        return null_arg("out");
    return guarded([&] {
        eec::SymMatrix m;
        if (const eec_status s = sym_from(b, n, m); s != EEC_OK)
            return s;
        *out = eec::minor_sum(m, j);
        return EEC_OK;
    });
}

eec_status eec_expected_det_delta(const double* b, int n, double x, double* out)
{
    if (out == nullptr)
        return null_arg("out");
    return guarded([&] {
        eec::SymMatrix m;
        if (const eec_status s = sym_from(b, n, m); s != EEC_OK)
            return s;
        *out = eec::expected_det_delta(m, x);
        return EEC_OK;
    });
}

eec_status eec_expected_det_xi(const double* b, int n, double x, double* out)
{
    if (out == nullptr)
        return null_arg("out");
    return guarded([&] {
        eec::SymMatrix m;
        if (const eec_status s = sym_from(b, n, m); s != EEC_OK)
            return s;
        *out = eec::expected_det_xi(m, x);
        return EEC_OK;
    });
}

eec_status eec_principal_sqrt_inv(const double* b, int n, double* out)
{
    if (out == nullptr)
        return null_arg("out");
    return guarded([&] {
        eec::SymMatrix m;
        if (const eec_status s = sym_from(b, n, m); s != EEC_OK)
            return s;
        const eec::SymMatrix q = eec::principal_sqrt_inv(m);
        Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(out, n, n) = q.dense();
        return EEC_OK;
    });
}

}  // extern "C"
