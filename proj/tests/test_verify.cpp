#include "eec/commands.hpp"
#include "eec/verify.hpp"

#include <doctest.h>

#include <sstream>

namespace {

std::string config_path(const std::string& name) { return std::string(EEC_SOURCE_DIR) + "/configs/" + name; }

bool all_pass(const std::vector<eec::Check>& checks)
{
    bool ok = !checks.empty();
    for (const auto& c : checks) {
        CAPTURE(c.name);
        CAPTURE(c.detail);
        CHECK(c.passed);
        ok = ok && c.passed;
    }
    return ok;
}

}  // namespace

TEST_CASE("identity checks pass and carry distinct names")
{
    const auto checks = eec::identity_checks();
    CHECK(all_pass(checks));
    for (std::size_t i = 0; i < checks.size(); ++i)
        for (std::size_t j = i + 1; j < checks.size(); ++j)
            CHECK(checks[i].name != checks[j].name);
}

TEST_CASE("matrix oracle checks pass at a small sample size")
{
    CHECK(all_pass(eec::matrix_oracle_checks(50000, 3)));
}

TEST_CASE("formula checks pass for every bundled config")
{
    for (const char* name : {"rect_centered_2d.cfg", "rect_mc_1d.cfg", "rect_mc_2d.cfg", "asymptotic_1d.cfg",
                             "asymptotic_2d.cfg", "sphere_centered.cfg", "sphere_zonal.cfg", "constant_mean.cfg"}) {
        CAPTURE(name);
        CHECK(all_pass(eec::formula_checks(eec::load_config(config_path(name)))));
    }
}

TEST_CASE("verify on the 1-D bump config, with and without simulation")
{
    const auto config = eec::load_config(config_path("rect_mc_1d.cfg"));
    const auto quick = eec::run_verify(config, {.seed = std::nullopt, .run_mc = false});
    CHECK(quick.passed());
    CHECK_FALSE(quick.mc.has_value());

    const auto full = eec::run_verify(config, {});
    CHECK(full.passed());
    REQUIRE(full.mc.has_value());
    CHECK(full.mc->levels.size() == config.levels.size());
    CHECK(full.checks.size() > quick.checks.size());

    std::ostringstream csv;
    eec::write_mc_csv(*full.mc, csv);
    CHECK(csv.str().rfind("u,emp_sup_prob,ci_lo,ci_hi,emp_mean_chi,chi_ci_lo,chi_ci_hi,formula_value\n", 0) == 0);
}

TEST_CASE("the printed bracket fails simulation on the 1-D bump config")
{
    auto config = eec::load_config(config_path("rect_mc_1d.cfg"));
    config.bracket = eec::BracketArgument::Level;
    const auto checks = eec::mc_checks(config, 1);
    bool any_failed = false;
    for (const auto& c : checks)
        any_failed = any_failed || !c.passed;
    CHECK(any_failed);
}
