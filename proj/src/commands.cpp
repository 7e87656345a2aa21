#include "eec/commands.hpp"

#include "eec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace eec {

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_eec_csv(const RunConfig& config, std::ostream& out)
{
    const MeanFunction mean = build_mean(config);
    if (config.domain == DomainKind::Rectangle) {
        const StationaryModel model = build_stationary(config);
        const Rectangle t = build_rectangle(config);
        out << "u,face_dim,sigma,eps,contribution,total,tail_bound\n";
        for (double u : config.levels) {
            const EecReport r = expected_euler_rect(model, mean, t, u, config.quadrature, config.bracket);
            for (const FaceContribution& f : r.per_face)
                out << num(u) << ',' << f.face.k << ',' << f.face.sigma_label() << ',' << f.face.eps_label() << ','
                    << num(f.contribution) << ',' << num(r.total) << ',' << num(f.tail_bound) << '\n';
        }
        return;
    }
    const SchoenbergModel model = build_schoenberg(config);
    const ChartMean chart(mean);
    out << "u,total,closed_form_if_centered,C1,C2,nodes,tail_bound\n";
    for (double u : config.levels) {
        const SphereReport r = expected_euler_sphere(model, chart, u, config.sphere_quadrature, config.bracket,
                                                   config.sphere_derivatives);
        out << num(u) << ',' << num(r.total) << ',' << (std::isnan(r.closed_form) ? "" : num(r.closed_form)) << ','
            << num(r.c1) << ',' << num(r.c2) << ',' << r.quad_nodes_used << ',' << num(r.tail_bound) << '\n';
    }
}

void write_mc_csv(const SimResult& result, std::ostream& out)
{
    out << "u,emp_sup_prob,ci_lo,ci_hi,emp_mean_chi,chi_ci_lo,chi_ci_hi,formula_value\n";
    for (const LevelRecord& r : result.levels)
        out << num(r.u) << ',' << num(r.sup_prob) << ',' << num(r.sup_ci.lo) << ',' << num(r.sup_ci.hi) << ','
            << num(r.mean_chi) << ',' << num(r.chi_ci.lo) << ',' << num(r.chi_ci.hi) << ',' << num(r.formula) << '\n';
}

void write_asymptotic_csv(const RunConfig& config, std::ostream& out)
{
    if (config.domain != DomainKind::Rectangle)
        throw ConfigError("domain", 0, "the Laplace asymptotic is available for rectangles only");
    const StationaryModel model = build_stationary(config);
    const MeanFunction mean = build_mean(config);
    const Rectangle t = build_rectangle(config);
    (void)find_interior_maximum(mean, t);
    out << "u,formula_total,laplace_value,ratio\n";
    for (double u : config.levels) {
        const double total = expected_euler_rect(model, mean, t, u, config.quadrature, config.bracket).total;
        const double laplace = laplace_asymptotic(model, mean, t, u);
        out << num(u) << ',' << num(total) << ',' << num(laplace) << ',' << num(total / laplace) << '\n';
    }
}

bool VerifyOutcome::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

VerifyOutcome run_verify(const RunConfig& config, const VerifyOptions& options)
{
    VerifyOutcome out;
    auto append = [&](std::vector<Check> more) {
        out.checks.insert(out.checks.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    };
    const std::uint64_t seed = options.seed.value_or(config.mc ? config.mc->seed : 1);
    append(identity_checks());
    append(matrix_oracle_checks(config.matrix_samples, seed));
    append(formula_checks(config));
    if (options.run_mc && config.mc) {
        SimResult sim;
        append(mc_checks(config, seed, &sim));
        if (!config.mc_csv.empty()) {
            std::ofstream csv(config.mc_csv);
            if (!csv)
                throw IoError("cannot write '" + config.mc_csv + "'");
            write_mc_csv(sim, csv);
        }
        out.mc = std::move(sim);
    }
    return out;
}

}  // namespace eec
