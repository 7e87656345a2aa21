#pragma once

// Named pass/fail checks run by `verify`: closed-form identities against
// independent oracles, the random-matrix Monte-Carlo suite, dual-path and
// reduction checks for the configured problem, and Monte-Carlo validation.

#include "eec/config.hpp"
#include "eec/simlab.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eec {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Hermite, Wick, Gegenbauer, sphere-measure and icosphere identities.
std::vector<Check> identity_checks();

// expected_det_delta / expected_det_xi against Monte-Carlo means within 4
// standard errors for N = 1..3, plus agreement of the Delta estimates under
// two values of nu.
std::vector<Check> matrix_oracle_checks(std::size_t samples, std::uint64_t seed);

// Reductions and dual paths for the configured problem at every level.
std::vector<Check> formula_checks(const RunConfig& config);

// Simulation of the configured problem; the result is returned for CSV
// output. Requires config.mc.
std::vector<Check> mc_checks(const RunConfig& config, std::uint64_t seed, SimResult* result = nullptr);

}  // namespace eec
