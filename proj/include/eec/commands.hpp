#pragma once

// Batch commands behind the CLI. Each writes RFC-4180 CSV (17 significant
// digits, '.' decimal separator) with a fixed header:
//
//   eec, rectangle:  u,face_dim,sigma,eps,contribution,total,tail_bound
//                    one row per face, sigma and eps space separated (1-based sigma)
//   eec, sphere:     u,total,closed_form_if_centered,C1,C2,nodes,tail_bound
//                    closed_form_if_centered empty for non-centered means
//   Monte-Carlo:     u,emp_sup_prob,ci_lo,ci_hi,emp_mean_chi,chi_ci_lo,chi_ci_hi,formula_value
//   asymptotic:      u,formula_total,laplace_value,ratio

#include "eec/config.hpp"
#include "eec/verify.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace eec {

void write_eec_csv(const RunConfig& config, std::ostream& out);

void write_mc_csv(const SimResult& result, std::ostream& out);

// Requires a rectangle and a mean with a unique interior maximum; the
// latter surfaces as DomainError("no interior maximum: ...").
void write_asymptotic_csv(const RunConfig& config, std::ostream& out);

struct VerifyOptions {
    std::optional<std::uint64_t> seed;  // overrides mc.seed and the matrix-oracle seed
    bool run_mc = true;
};

struct VerifyOutcome {
    std::vector<Check> checks;
    std::optional<SimResult> mc;

    [[nodiscard]] bool passed() const;
};

// Identity, matrix-oracle and formula checks, then Monte-Carlo checks when
// the config has an mc section and options.run_mc is set. When output.mc_csv
// is set the Monte-Carlo table is written there.
VerifyOutcome run_verify(const RunConfig& config, const VerifyOptions& options);

}  // namespace eec
