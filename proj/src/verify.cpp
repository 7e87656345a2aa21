#include "eec/verify.hpp"

#include "eec/errors.hpp"
#include "eec/identities.hpp"
#include "eec/matrix_oracle.hpp"
#include "eec/matrixcalc.hpp"
#include "eec/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

namespace eec {

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double rel_err(double a, double b, double floor = 1e-300)
{
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Worst relative deviation over a family of comparisons.
struct Worst {
    double value = 0.0;
    void add(double e) { value = std::max(value, std::isnan(e) ? INFINITY : e); }
};

Check tolerance_check(std::string name, double worst, double tol)
{
    return {std::move(name), worst <= tol, fmt("max relative error %.3g (tolerance %.0e)", worst, tol)};
}

Check hermite_recurrence_check()
{
    Worst w;
    for (double x : {-3.0, -1.5, 0.0, 0.7, 2.0, 4.0}) {
        w.add(rel_err(hermite(0, x), 1.0));
        w.add(rel_err(hermite(1, x), x, 1.0));
        for (int n = 1; n < 20; ++n) {
            const double scale = std::abs(x * hermite(n, x)) + n * std::abs(hermite(n - 1, x));
            w.add(std::abs(hermite(n + 1, x) - (x * hermite(n, x) - n * hermite(n - 1, x))) / std::max(scale, 1.0));
        }
        // H_{-1} is the rescaled Gaussian tail.
        const double h_minus = std::sqrt(2.0 * std::numbers::pi) * gaussian_tail(x) * std::exp(0.5 * x * x);
        w.add(rel_err(hermite(-1, x), h_minus));
    }
    return tolerance_check("identity.hermite_recurrence", w.value, 1e-12);
}

Check hermite_integral_check()
{
    Worst w;
    for (double u : {-1.0, 0.0, 1.0, 2.5, 4.0})
        for (int n = 0; n <= 8; ++n) {
            // Scale floor sqrt(n!) = L2 norm of H_n under the Gaussian weight, up to (2 pi)^{1/4}.
            const double closed = hermite(n - 1, u) * std::exp(-0.5 * u * u);
            w.add(rel_err(oracle::hermite_tail_integral(n, u), closed, std::sqrt(std::tgamma(n + 1.0))));
        }
    return tolerance_check("identity.hermite_integral", w.value, 1e-9);
}

Check hermite_expansion_check()
{
    Worst w;
    for (double x : {-2.0, -0.5, 0.3, 1.7, 3.0})
        for (int n = 0; n <= 12; ++n) {
            // The alternating sum cancels; measure against its absolute magnitude.
            double magnitude = 0.0;
            for (int k = 0; 2 * k <= n; ++k)
                magnitude += std::tgamma(n + 1.0) * std::abs(hermite(n - 2 * k, x)) /
                             (std::tgamma(k + 1.0) * std::ldexp(1.0, k) * std::tgamma(n - 2.0 * k + 1.0));
            w.add(std::abs(oracle::hermite_expansion(n, x) - std::pow(x, n)) / magnitude);
        }
    return tolerance_check("identity.hermite_expansion", w.value, 1e-10);
}

Check wick_check()
{
    std::mt19937_64 gen(derive_seed(0x5eed, 1));
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> pick(0, 3);
    Eigen::MatrixXd a(4, 4);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        a.data()[i] = normal(gen);
    const Eigen::MatrixXd cov = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(4, 4);
    Worst w;
    for (int n = 1; n <= 8; ++n)
        for (int rep = 0; rep < 6; ++rep) {
            std::vector<int> idx(static_cast<std::size_t>(n));
            for (int& i : idx)
                i = pick(gen);
            w.add(rel_err(wick_moment(cov, idx), oracle::wick_by_permutations(cov, idx), 1e-12));
        }
    return tolerance_check("identity.wick_bruteforce", w.value, 1e-12);
}

Check gegenbauer_check()
{
    Worst w;
    for (double lambda : {0.5, 1.0, 1.5})
        for (double x : {-0.9, -0.3, 0.0, 0.4, 0.95})
            for (int n = 0; n <= 10; ++n)
                w.add(rel_err(gegenbauer(n, lambda, x), oracle::gegenbauer_by_contour(n, lambda, x), 1.0));
    return tolerance_check("identity.gegenbauer_generating_function", w.value, 1e-10);
}

Check sphere_measure_check()
{
    Worst w;
    for (int n = 1; n <= 4; ++n)
        w.add(rel_err(oracle::sphere_measure(n), sphere_area(n)));
    return tolerance_check("identity.sphere_measure", w.value, 1e-12);
}

Check icosphere_check()
{
    std::string detail;
    bool ok = true;
    for (int s = 0; s <= 4; ++s) {
        const GridDesign d = GridDesign::icosphere(s);
        const long chi = d.euler_characteristic();
        const auto v = d.points.size();
        ok = ok && chi == 2 && v == 10u * (std::size_t{1} << (2 * s)) + 2u;
        detail += (s ? ", " : "") + std::string("level ") + std::to_string(s) + ": V-E+F=" + std::to_string(chi);
    }
    return {"identity.icosphere_euler", ok, detail};
}

SymMatrix random_symmetric(int n, std::mt19937_64& gen)
{
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    SymMatrix b(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            b.set(i, j, unif(gen));
    return b;
}

double relative_tolerance(double value) { return std::max(1.0, std::abs(value)); }

// Hermite closed form for a centered field: the interior x-integral of
// H_k-weighted densities reduces to H_{k-1}(u) e^{-u^2/2}.
double centered_rect_closed_form(const StationaryModel& model, const MeanFunction& mean, const Rectangle& t, double u)
{
    double total = 0.0;
    for (const Face& f : enumerate_faces(t)) {
        Eigen::VectorXd free(f.k);
        for (int i = 0; i < f.k; ++i)
            free(i) = 0.5 * (t.lo()(f.sigma[static_cast<std::size_t>(i)]) + t.hi()(f.sigma[static_cast<std::size_t>(i)]));
        const Eigen::VectorXd mid = f.point(free, t.dim());
        const double orthant = orthant_prob(model, mean, f, mid).probability;
        if (f.k == 0) {
            total += orthant * gaussian_tail(u);
            continue;
        }
        const double det = face_lambda(model, f).dense().determinant();
        total += f.volume * std::sqrt(det) * std::pow(2.0 * std::numbers::pi, -0.5 * (f.k + 1)) * orthant *
                 hermite(f.k - 1, u) * std::exp(-0.5 * u * u);
    }
    return total;
}

}  // namespace

std::vector<Check> identity_checks()
{
    return {hermite_recurrence_check(), hermite_integral_check(), hermite_expansion_check(),
            wick_check(),               gegenbauer_check(),       sphere_measure_check(),
            icosphere_check()};
}

std::vector<Check> matrix_oracle_checks(std::size_t samples, std::uint64_t seed)
{
    std::vector<Check> out;
    std::mt19937_64 gen(derive_seed(seed, 0xb));
    std::uint64_t stream = 0;
    for (int n = 1; n <= 3; ++n) {
        const SymMatrix b = random_symmetric(n, gen);
        for (MatrixKind kind : {MatrixKind::Delta, MatrixKind::Xi}) {
            const bool delta = kind == MatrixKind::Delta;
            double worst = 0.0;
            double worst_pair = 0.0;
            for (double x : {-0.5, 1.0, 2.0}) {
                const double exact = delta ? expected_det_delta(b, x) : expected_det_xi(b, x);
                const McEstimate e3 =
                    mc_expected_det(MatrixCovariance::isotropic(n, kind, 3.0), b, x, samples, derive_seed(seed, ++stream));
                const McEstimate e5 =
                    mc_expected_det(MatrixCovariance::isotropic(n, kind, 5.0), b, x, samples, derive_seed(seed, ++stream));
                worst = std::max({worst, std::abs(e3.mean - exact) / e3.std_error,
                                  std::abs(e5.mean - exact) / e5.std_error});
                worst_pair = std::max(worst_pair, std::abs(e3.mean - e5.mean) /
                                                      std::hypot(e3.std_error, e5.std_error));
            }
            const std::string tag = std::string(delta ? "delta" : "xi") + ".N=" + std::to_string(n);
            out.push_back({"matrix_oracle." + tag, worst <= 4.0,
                           fmt("max |z| = %.2f over x in {-0.5, 1, 2}, nu in {3, 5}", worst)});
            out.push_back({"matrix_oracle.nu_invariance." + tag, worst_pair <= 4.0,
                           fmt("max |z| between nu = 3 and nu = 5: %.2f", worst_pair)});
        }
    }
    return out;
}

std::vector<Check> formula_checks(const RunConfig& config)
{
    std::vector<Check> out;
    const MeanFunction mean = build_mean(config);
    if (config.domain == DomainKind::Rectangle) {
        const StationaryModel model = build_stationary(config);
        const Rectangle t = build_rectangle(config);
        QuadratureSpec fine = config.quadrature;
        fine.nodes_per_axis *= 2;
        fine.nodes_x *= 2;
        Worst refine;
        Worst centered;
        Worst iso;
        bool faces_ok = true;
        for (double u : config.levels) {
            const EecReport r = expected_euler_rect(model, mean, t, u, config.quadrature, config.bracket);
            faces_ok = faces_ok && r.per_face.size() == static_cast<std::size_t>(std::pow(3, t.dim()));
            const double f = expected_euler_rect(model, mean, t, u, fine, config.bracket).total;
            refine.add(std::abs(r.total - f) / relative_tolerance(r.total));
            if (mean.is_centered())
                centered.add(rel_err(r.total, centered_rect_closed_form(model, mean, t, u)));
            if (model.is_isotropic())
                iso.add(rel_err(r.total,
                                expected_euler_rect_isotropic(model, mean, t, u, config.quadrature, config.bracket).total));
        }
        out.push_back({"rect.face_count", faces_ok, "3^N faces per level"});
        out.push_back(tolerance_check("rect.node_refinement", refine.value, 1e-6));
        if (mean.is_centered())
            out.push_back(tolerance_check("rect.centered_closed_form", centered.value, 1e-8));
        if (model.is_isotropic())
            out.push_back(tolerance_check("rect.isotropic_dual_path", iso.value, 1e-10));
    }
    else {
        const SchoenbergModel model = build_schoenberg(config);
        const ChartMean chart(mean);
        SphereQuadrature fine = config.sphere_quadrature;
        fine.colatitude_nodes *= 2;
        fine.longitude_nodes *= 2;
        fine.nodes_x *= 2;
        Worst refine;
        Worst centered;
        for (double u : config.levels) {
            const SphereReport r = expected_euler_sphere(model, chart, u, config.sphere_quadrature, config.bracket,
                                                         config.sphere_derivatives);
            const double f = expected_euler_sphere(model, chart, u, fine, config.bracket, config.sphere_derivatives).total;
            refine.add(std::abs(r.total - f) / relative_tolerance(r.total));
            if (mean.is_centered())
                centered.add(rel_err(r.total, r.closed_form));
        }
        out.push_back(tolerance_check("sphere.node_refinement", refine.value, 1e-6));
        if (mean.is_centered())
            out.push_back(tolerance_check("sphere.centered_closed_form", centered.value, 1e-6));
    }
    return out;
}

std::vector<Check> mc_checks(const RunConfig& config, std::uint64_t seed, SimResult* result)
{
    if (!config.mc)
        throw ConfigError("mc", 0, "Monte-Carlo settings are missing");
    const McSpec& spec = *config.mc;
    const McSettings mc{spec.samples, seed, spec.block};
    const MeanFunction mean = build_mean(config);
    SimResult res = config.domain == DomainKind::Rectangle
                        ? run_mc_validation(build_stationary(config), mean, build_rectangle(config), spec.grid,
                                            config.levels, mc, config.quadrature, config.bracket)
                        : run_mc_validation(build_schoenberg(config), ChartMean(mean), spec.icosphere_level,
                                            config.levels, mc, config.sphere_quadrature, config.bracket,
                                            config.sphere_derivatives);

    std::vector<Check> out;
    bool monotone = true;
    for (std::size_t i = 0; i < res.levels.size(); ++i) {
        const LevelRecord& r = res.levels[i];
        if (i > 0)
            monotone = monotone && r.sup_prob <= res.levels[i - 1].sup_prob;
        char u[32];
        std::snprintf(u, sizeof u, "%g", r.u);
        out.push_back({std::string("mc.mean_chi.u=") + u, r.chi_ci.lo <= r.formula && r.formula <= r.chi_ci.hi,
                       fmt("formula %.6g, 99%% CI [%.6g, %.6g]", r.formula, r.chi_ci.lo, r.chi_ci.hi)});
        if (r.u >= 2.5) {
            const double bound = (r.sup_ci.hi - r.sup_ci.lo) + spec.allowance * std::abs(r.formula);
            const double gap = std::abs(r.sup_prob - r.formula);
            out.push_back({std::string("mc.sup_prob.u=") + u, gap <= bound,
                           fmt("|sup prob - formula| = %.4g, allowed %.4g (sup prob %.6g)", gap, bound, r.sup_prob)});
        }
    }
    out.push_back({"mc.sup_prob_monotone", monotone, "empirical sup probability non-increasing in u"});
    if (result)
        *result = std::move(res);
    return out;
}

}  // namespace eec
