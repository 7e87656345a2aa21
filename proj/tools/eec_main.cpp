// Command-line driver. Links only the C API.

#include "eec/eec.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <optional>
#include <string>

namespace {

enum Exit { ok = 0, verify_failed = 1, config_error = 2, numeric_error = 3 };

int exit_code(eec_status s)
{
    switch (s) {
    case EEC_OK: return ok;
    case EEC_ERR_VERIFY_FAILED: return verify_failed;
    case EEC_ERR_CONFIG:
    case EEC_ERR_DOMAIN:
    case EEC_ERR_MODEL:
    case EEC_ERR_IO:
    case EEC_ERR_INVALID_ARG: return config_error;
    case EEC_ERR_SINGULAR:
    case EEC_ERR_NUMERIC:
    case EEC_ERR_INTERNAL: return numeric_error;
    }
    return numeric_error;
}

int report(eec_status s)
{
    if (s == EEC_ERR_CONFIG)  // the message already carries line and field
        std::fprintf(stderr, "eec: %s\n", eec_last_error());
    else if (s != EEC_OK)
        std::fprintf(stderr, "eec: %s: %s\n", eec_status_name(s), eec_last_error());
    return exit_code(s);
}

using ConfigPtr = std::unique_ptr<eec_config, decltype(&eec_config_free)>;

std::optional<ConfigPtr> load(const std::string& path, int& code)
{
    eec_config* raw = nullptr;
    const eec_status s = eec_config_load(path.c_str(), &raw);
    if (s != EEC_OK) {
        code = report(s);
        return std::nullopt;
    }
    return ConfigPtr(raw, &eec_config_free);
}

const char* out_or_config(const std::string& out, const eec_config* config)
{
    return out.empty() ? eec_config_output_path(config) : out.c_str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Expected Euler characteristic of Gaussian excursion sets"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool no_mc = false;

    CLI::App* eec = app.add_subcommand("eec", "Evaluate the formula at every configured level");
    eec->add_option("config", config_path, "Run configuration")->required();
    eec->add_option("--out", out_path, "CSV destination (default: output.path, else stdout)");

    CLI::App* verify = app.add_subcommand("verify", "Run identity, matrix-oracle, formula and Monte-Carlo checks");
    verify->add_option("config", config_path, "Run configuration")->required();
    CLI::Option* seed_opt = verify->add_option("--seed", seed, "Override the Monte-Carlo seed");
    verify->add_flag("--no-mc", no_mc, "Skip the Monte-Carlo validation");

    CLI::App* asym = app.add_subcommand("asymptotic", "Compare the formula with its Laplace asymptotic");
    asym->add_option("config", config_path, "Run configuration")->required();
    asym->add_option("--out", out_path, "CSV destination (default: output.path, else stdout)");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    int code = ok;
    const auto config = load(config_path, code);
    if (!config)
        return code;

    if (eec->parsed())
        return report(eec_run_eec(config->get(), out_or_config(out_path, config->get())));
    if (asym->parsed())
        return report(eec_run_asymptotic(config->get(), out_or_config(out_path, config->get())));

    const eec_verify_options options{seed_opt->count() > 0 ? 1 : 0, seed, no_mc ? 0 : 1};
    eec_verify_report* raw = nullptr;
    const eec_status s = eec_run_verify(config->get(), &options, &raw);
    const std::unique_ptr<eec_verify_report, decltype(&eec_verify_report_free)> rep(raw, &eec_verify_report_free);
    if (rep) {
        std::size_t failed = 0;
        const std::size_t n = eec_verify_report_count(rep.get());
        for (std::size_t i = 0; i < n; ++i) {
            const char* name = nullptr;
            const char* detail = nullptr;
            int passed = 0;
            eec_verify_report_check(rep.get(), i, &name, &passed, &detail);
            failed += passed ? 0 : 1;
            std::printf("%s %s: %s\n", passed ? "PASS" : "FAIL", name, detail);
        }
        std::printf("%zu/%zu checks passed\n", n - failed, n);
        std::fflush(stdout);
    }
    return report(s);
}
