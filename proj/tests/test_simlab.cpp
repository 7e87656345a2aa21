#include "oracles.hpp"

#include "eec/errors.hpp"
#include "eec/simlab.hpp"

#include <doctest.h>

#include <random>

using eec::GridDesign;
using eec::MeanFunction;
using eec::Rectangle;
using eec::StationaryModel;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v)
        out(i++) = x;
    return out;
}

eec::PointCovariance se_cov(double ell)
{
    return [ell](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return std::exp(-(a - b).squaredNorm() / (2 * ell * ell));
    };
}

const eec::PointMean zero_mean = [](const Eigen::VectorXd&) { return 0.0; };

bool inside(double v, eec::Interval ci) { return ci.lo <= v && v <= ci.hi; }

}  // namespace

TEST_CASE("single point: sample mean 0 and variance 1")
{
    const int n = 40000;
    const auto x = eec::sample_gaussian_field({vec({0.3})}, se_cov(1.0), zero_mean, n, 5);
    REQUIRE(x.rows() == 1);
    REQUIRE(x.cols() == n);
    const double mean = x.mean();
    const double var = (x.array() - mean).square().sum() / (n - 1);
    CHECK(std::abs(mean) <= 4 / std::sqrt(n));
    CHECK(std::abs(var - 1.0) <= 4 * std::sqrt(2.0 / n));
}

TEST_CASE("two points: empirical correlation within its interval")
{
    const int n = 40000;
    const double rho = std::exp(-0.5);
    const auto x = eec::sample_gaussian_field({vec({0.0}), vec({1.0})}, se_cov(1.0), zero_mean, n, 8);
    const double r = (x.row(0).array() * x.row(1).array()).mean();
    // Var(Z1 Z2) = 1 + rho^2 for unit-variance jointly Gaussian pairs.
    CHECK(std::abs(r - rho) <= 4 * std::sqrt((1 + rho * rho) / n));
}

TEST_CASE("a mean function shifts each point")
{
    const int n = 20000;
    const std::vector<Eigen::VectorXd> pts = {vec({0.0}), vec({0.5}), vec({1.0})};
    const auto x = eec::sample_gaussian_field(pts, se_cov(0.3), [](const Eigen::VectorXd& t) { return 2.0 * t(0) - 1.0; },
                                              n, 13);
    for (Eigen::Index i = 0; i < 3; ++i)
        CHECK(std::abs(x.row(i).mean() - (2.0 * pts[static_cast<std::size_t>(i)](0) - 1.0)) <= 4 / std::sqrt(n));
}

TEST_CASE("sampling is seed deterministic and reports jitter")
{
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < 50; ++i)
        pts.push_back(vec({i / 49.0}));
    const auto a = eec::sample_gaussian_field(pts, se_cov(0.5), zero_mean, 300, 99);
    const auto b = eec::sample_gaussian_field(pts, se_cov(0.5), zero_mean, 300, 99);
    const auto c = eec::sample_gaussian_field(pts, se_cov(0.5), zero_mean, 300, 100);
    CHECK(a == b);
    CHECK(a != c);

    // Nearly collinear covariance: the factorization needs jitter.
    Eigen::MatrixXd cov(50, 50);
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j)
            cov(i, j) = se_cov(0.5)(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
    const eec::FieldSampler sampler(cov, Eigen::VectorXd::Zero(50));
    CHECK(sampler.jitter() > 0.0);
    CHECK(sampler.jitter() <= 1e-8);
    std::vector<Eigen::VectorXd> too_many(eec::max_design_points + 1, vec({0.0}));
    CHECK_THROWS_AS(eec::sample_gaussian_field(too_many, se_cov(1.0), zero_mean, 2, 1), eec::DomainError);
}

TEST_CASE("lattice and icosphere complexes")
{
    const auto g = GridDesign::lattice(Rectangle::unit(2), {4, 3});
    CHECK(g.points.size() == 12);
    CHECK(g.euler_characteristic() == 1);
    CHECK(g.points.front() == vec({0.0, 0.0}));
    CHECK(g.points[1] == vec({1.0 / 3.0, 0.0}));
    CHECK(g.points.back() == vec({1.0, 1.0}));
    CHECK(GridDesign::lattice(Rectangle::unit(3), {3, 3, 3}).euler_characteristic() == 1);
    CHECK_THROWS_AS(GridDesign::lattice(Rectangle::unit(2), {1, 3}), eec::DomainError);
    for (int level = 0; level <= 3; ++level) {
        const auto s = GridDesign::icosphere(level);
        CHECK(s.euler_characteristic() == 2);
        for (const auto& p : s.points)
            CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("empirical Euler characteristic of planted configurations")
{
    const auto g = GridDesign::lattice(Rectangle::unit(2), {5, 5});
    Eigen::VectorXd v = Eigen::VectorXd::Constant(25, 3.0);
    CHECK(eec::empirical_euler_characteristic(g, v, 1.0) == 1);
    CHECK(eec::empirical_euler_characteristic(g, v, 4.0) == 0);
    v.setZero();
    v(12) = 2.0;
    CHECK(eec::empirical_euler_characteristic(g, v, 1.0) == 1);
    // Two blobs at opposite corners.
    v(12) = 0.0;
    for (int i : {0, 1, 5, 6, 18, 19, 23, 24})
        v(i) = 2.0;
    CHECK(eec::empirical_euler_characteristic(g, v, 1.0) == 2);
    // A ring around an unexcursed center.
    v.setZero();
    for (int i : {6, 7, 8, 11, 13, 16, 17, 18})
        v(i) = 2.0;
    CHECK(eec::empirical_euler_characteristic(g, v, 1.0) == 0);
    CHECK_THROWS_AS(eec::empirical_euler_characteristic(g, Eigen::VectorXd::Zero(24), 1.0), eec::DomainError);

    const auto s = GridDesign::icosphere(2);
    CHECK(eec::empirical_euler_characteristic(s, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(s.points.size())), 0.5) == 2);
}

TEST_CASE("wilson interval covers a synthetic Bernoulli stream at its nominal rate")
{
    std::mt19937_64 rng(17);
    const double p = 0.03;
    std::bernoulli_distribution coin(p);
    int covered = 0;
    const int runs = 2000;
    for (int r = 0; r < runs; ++r) {
        std::size_t hits = 0;
        for (int i = 0; i < 500; ++i)
            hits += coin(rng);
        covered += inside(p, eec::wilson_interval(hits, 500));
    }
    // 99% nominal; binomial slack of 4 standard deviations.
    CHECK(covered >= static_cast<int>(runs * (0.99 - 4 * std::sqrt(0.99 * 0.01 / runs))));
    const auto zero = eec::wilson_interval(0, 100);
    CHECK(zero.lo == 0.0);
    CHECK(zero.hi > 0.0);
    CHECK_THROWS_AS(eec::wilson_interval(5, 4), eec::DomainError);
}

TEST_CASE("level records: monotone sup probability, standard error from the sample spread")
{
    const auto model = StationaryModel::squared_exponential(1, 0.2);
    eec::McSettings mc;
    mc.n_samples = 20000;
    mc.seed = 4;
    const auto res = eec::run_mc_validation(model, MeanFunction::constant(1, 0.0), Rectangle::unit(1), {60},
                                            {0.5, 1.0, 2.0, 3.0}, mc);
    REQUIRE(res.levels.size() == 4);
    for (std::size_t l = 1; l < res.levels.size(); ++l)
        CHECK(res.levels[l].sup_prob <= res.levels[l - 1].sup_prob);
    for (const auto& r : res.levels) {
        CHECK(inside(r.sup_prob, r.sup_ci));
        CHECK(r.chi_ci.hi - r.chi_ci.lo == doctest::Approx(2 * eec::normal_quantile(0.995) * r.chi_std_error));
        CHECK(r.chi_std_error > 0.0);
    }
    const auto again = eec::run_mc_validation(model, MeanFunction::constant(1, 0.0), Rectangle::unit(1), {60},
                                              {0.5, 1.0, 2.0, 3.0}, mc);
    for (std::size_t l = 0; l < res.levels.size(); ++l) {
        CHECK(again.levels[l].mean_chi == res.levels[l].mean_chi);
        CHECK(again.levels[l].sup_prob == res.levels[l].sup_prob);
    }
}

TEST_CASE("centered interval: formula inside the chi interval at u = 2")
{
    const auto model = StationaryModel::squared_exponential(1, 0.2);
    eec::McSettings mc;
    mc.n_samples = 100000;
    const auto res = eec::run_mc_validation(model, MeanFunction::constant(1, 0.0), Rectangle::unit(1), {200}, {2.0}, mc);
    const double ref = oracle::psi(2.0) + 5.0 / (2 * std::numbers::pi) * std::exp(-2.0);
    CHECK(res.levels[0].formula == doctest::Approx(ref).epsilon(1e-10));
    CHECK(inside(ref, res.levels[0].chi_ci));
}

TEST_CASE("grid refinement moves the mean chi toward the formula")
{
    const auto model = StationaryModel::squared_exponential(1, 0.2);
    eec::McSettings mc;
    mc.n_samples = 50000;
    double previous = INFINITY;
    for (int nodes : {6, 12, 48}) {
        const auto res = eec::run_mc_validation(model, MeanFunction::constant(1, 0.0), Rectangle::unit(1), {nodes},
                                                {1.0}, mc);
        const double gap = std::abs(res.levels[0].mean_chi - res.levels[0].formula);
        CHECK(gap < previous);
        previous = gap;
    }
}

TEST_CASE("grid maxima underestimate the continuous supremum")
{
    const auto model = StationaryModel::squared_exponential(1, 0.2);
    Eigen::MatrixXd a(1, 1);
    a << 20.0;
    eec::McSettings mc;
    mc.n_samples = 50000;
    const auto res = eec::run_mc_validation(model, MeanFunction::quadratic_bump(1.0, vec({0.5}), a), Rectangle::unit(1),
                                            {40}, {2.5, 3.0}, mc);
    for (const auto& r : res.levels)
        CHECK(r.sup_prob <= r.formula + (r.sup_ci.hi - r.sup_ci.lo));
}

TEST_CASE("simulation separates the residual bracket from the printed one")
{
    // rectangle: bump of height 1 on [0, 1]
    const auto model = StationaryModel::squared_exponential(1, 0.15);
    Eigen::MatrixXd a(1, 1);
    a << 20.0;
    const auto bump = MeanFunction::quadratic_bump(1.0, vec({0.5}), a);
    eec::McSettings mc;
    mc.n_samples = 100000;
    const auto residual = eec::run_mc_validation(model, bump, Rectangle::unit(1), {200}, {2.5}, mc);
    const auto printed = eec::run_mc_validation(model, bump, Rectangle::unit(1), {200}, {2.5}, mc, {},
                                                eec::BracketArgument::Level);
    CHECK(inside(residual.levels[0].formula, residual.levels[0].chi_ci));
    CHECK_FALSE(inside(printed.levels[0].formula, printed.levels[0].chi_ci));

    // sphere: zonal mean cos th1 on S^2
    const auto sphere = eec::SchoenbergModel::geometric(2, 0.3);
    const eec::ChartMean zonal(MeanFunction::cosine_product(2, 0.0, {1.0}, {vec({1.0, 0.0})}));
    mc.n_samples = 50000;
    mc.seed = 3;
    const auto frame = eec::run_mc_validation(sphere, zonal, 3, {2.0}, mc);
    const auto chart = eec::run_mc_validation(sphere, zonal, 3, {2.0}, mc, {}, eec::BracketArgument::Level,
                                              eec::SphereDerivatives::Chart);
    CHECK(inside(frame.levels[0].formula, frame.levels[0].chi_ci));
    CHECK_FALSE(inside(chart.levels[0].formula, chart.levels[0].chi_ci));
}
