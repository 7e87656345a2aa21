#include "oracles.hpp"

#include "eec/errors.hpp"
#include "eec/field_model.hpp"

#include <doctest.h>

using eec::MeanFunction;
using eec::SchoenbergModel;
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

// lambda_ij = -d^2 C / dh_i dh_j at 0, by central differences.
Eigen::MatrixXd lambda_by_differences(const StationaryModel& m)
{
    const int n = m.dim();
    const double h = 1e-4;
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd ei = Eigen::VectorXd::Zero(n);
            Eigen::VectorXd ej = Eigen::VectorXd::Zero(n);
            ei(i) = h;
            ej(j) = h;
            const double d = m.covariance(ei + ej) - m.covariance(ei - ej) - m.covariance(-ei + ej) +
                             m.covariance(-ei - ej);
            out(i, j) = -d / (4 * h * h);
        }
    return out;
}

// Explicit ultraspherical sum.
double gegenbauer_explicit(int n, double lambda, double x)
{
    double s = 0.0;
    for (int k = 0; 2 * k <= n; ++k)
        s += ((k % 2) ? -1.0 : 1.0) * std::tgamma(n - k + lambda) /
             (std::tgamma(lambda) * std::tgamma(k + 1.0) * std::tgamma(n - 2.0 * k + 1.0)) * std::pow(2 * x, n - 2 * k);
    return s;
}

}  // namespace

TEST_CASE("squared exponential moments")
{
    const auto m = StationaryModel::squared_exponential(2, 0.5);
    CHECK(m.covariance(Eigen::VectorXd::Zero(2)) == 1.0);
    CHECK(m.covariance(vec({0.5, 0.0})) == doctest::Approx(std::exp(-0.5)));
    CHECK((m.lambda() - 4.0 * Eigen::MatrixXd::Identity(2, 2)).norm() == doctest::Approx(0.0));
    CHECK((lambda_by_differences(m) - m.lambda()).norm() <= 1e-5);
    CHECK(m.fourth(0, 0, 0, 0) == doctest::Approx(3.0 * 16.0));
    CHECK(m.fourth(0, 0, 1, 1) == doctest::Approx(16.0));
    CHECK(m.fourth(0, 1, 0, 1) == doctest::Approx(16.0));
    CHECK(m.fourth(0, 0, 0, 1) == doctest::Approx(0.0));
    CHECK(m.is_isotropic());
    CHECK(m.isotropic_gamma() == doctest::Approx(2.0));
}

TEST_CASE("cosine mixture moments are weighted frequency products")
{
    const std::vector<Eigen::VectorXd> w = {vec({1.0, 0.5}), vec({-0.3, 2.0}), vec({1.5, 1.5})};
    const auto m = StationaryModel::cosine_mixture(w, {2.0, 1.0, 1.0});
    const double weights[] = {0.5, 0.25, 0.25};
    Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(2, 2);
    for (int r = 0; r < 3; ++r)
        lam += weights[r] * w[static_cast<std::size_t>(r)] * w[static_cast<std::size_t>(r)].transpose();
    CHECK((m.lambda() - lam).norm() <= 1e-14);
    CHECK((lambda_by_differences(m) - lam).norm() <= 1e-5);
    double f0101 = 0.0;
    for (int r = 0; r < 3; ++r)
        f0101 += weights[r] * std::pow(w[static_cast<std::size_t>(r)](0), 2) * std::pow(w[static_cast<std::size_t>(r)](1), 2);
    CHECK(m.fourth(0, 1, 0, 1) == doctest::Approx(f0101));
    CHECK(m.fourth(1, 0, 1, 0) == doctest::Approx(f0101));
    CHECK_FALSE(m.is_isotropic());
    CHECK_THROWS_AS((void)m.isotropic_gamma(), eec::DomainError);
}

TEST_CASE("degenerate stationary models are rejected")
{
    CHECK_THROWS_AS(StationaryModel::squared_exponential(2, 0.0), eec::ModelError);
    CHECK_THROWS_AS(StationaryModel::cosine_mixture({vec({1.0, 0.0})}, {1.0}), eec::ModelError);
    CHECK_THROWS_AS(StationaryModel::cosine_mixture({vec({1.0, 0.0}), vec({0.0, 1.0})}, {1.0, -1.0}), eec::ModelError);
    CHECK_THROWS_AS(StationaryModel::cosine_mixture({vec({1.0, 0.0}), vec({0.0})}, {1.0, 1.0}), eec::ModelError);
}

TEST_CASE("mean derivatives match finite differences")
{
    Eigen::MatrixXd a(2, 2);
    a << 3.0, 0.5, 0.5, 2.0;
    const std::vector<MeanFunction> means = {
        MeanFunction::constant(2, 0.7),
        MeanFunction::linear(0.2, vec({1.0, -2.0})),
        MeanFunction::quadratic_bump(1.0, vec({0.4, 0.6}), a),
        MeanFunction::cosine_product(2, 0.1, {0.8, -0.4}, {vec({1.0, 2.0}), vec({3.0, 0.0})}),
    };
    const double h = 1e-5;
    for (const auto& m : means) {
        for (const auto& t : {vec({0.1, 0.2}), vec({0.7, 0.35})}) {
            for (int i = 0; i < 2; ++i) {
                Eigen::VectorXd d = Eigen::VectorXd::Zero(2);
                d(i) = h;
                CHECK(m.grad(t)(i) == doctest::Approx((m.eval(t + d) - m.eval(t - d)) / (2 * h)).epsilon(1e-7));
                const Eigen::VectorXd dg = (m.grad(t + d) - m.grad(t - d)) / (2 * h);
                for (int j = 0; j < 2; ++j)
                    CHECK(m.hess(t)(j, i) == doctest::Approx(dg(j)).epsilon(1e-7));
            }
        }
    }
    CHECK(MeanFunction::quadratic_bump(1.0, vec({0.4, 0.6}), a).eval(vec({0.4, 0.6})) == 1.0);
    CHECK(MeanFunction::constant(2, 0.0).is_centered());
    CHECK_FALSE(MeanFunction::constant(2, 0.1).is_centered());
    CHECK_THROWS_AS(MeanFunction::quadratic_bump(0.0, vec({0.0, 0.0}), -a), eec::ModelError);
}

TEST_CASE("gegenbauer matches the explicit sum")
{
    for (double lambda : {0.5, 1.0, 1.5, 2.5})
        for (int n = 0; n <= 10; ++n)
            for (double x : {-1.0, -0.3, 0.0, 0.6, 1.0})
                CHECK(eec::gegenbauer(n, lambda, x) == doctest::Approx(gegenbauer_explicit(n, lambda, x)).epsilon(1e-12));
    // P_n^{1/2} is the Legendre polynomial.
    CHECK(eec::gegenbauer(2, 0.5, 0.3) == doctest::Approx(0.5 * (3 * 0.09 - 1)));
    CHECK_THROWS_AS(eec::gegenbauer(2, 0.0, 0.3), eec::DomainError);
}

TEST_CASE("schoenberg basis on the circle is Chebyshev")
{
    for (int n = 0; n <= 8; ++n) {
        CHECK(eec::schoenberg_basis(n, 0.0, std::cos(0.7)) == doctest::Approx(std::cos(n * 0.7)).epsilon(1e-12));
        CHECK(eec::schoenberg_basis_at_one(n, 0.0) == 1.0);
    }
    CHECK(eec::schoenberg_basis_at_one(3, 1.0) == doctest::Approx(4.0));
    CHECK(eec::schoenberg_basis_at_one(3, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("schoenberg model is normalized and C', C'' match differences")
{
    for (int dim : {1, 2, 3}) {
        const auto m = SchoenbergModel::from_coefficients(dim, {0.4, 0.9, 0.3, 0.2});
        CHECK(m.covariance(1.0) == doctest::Approx(1.0).epsilon(1e-14));
        const double h = 1e-4;
        const double d1 = (3 * m.covariance(1.0) - 4 * m.covariance(1.0 - h) + m.covariance(1.0 - 2 * h)) / (2 * h);
        const double d2 = (m.covariance(1.0) - 2 * m.covariance(1.0 - h) + m.covariance(1.0 - 2 * h)) / (h * h);
        CHECK(m.c1() == doctest::Approx(d1).epsilon(1e-6));
        CHECK(m.c2() == doctest::Approx(d2).epsilon(1e-3));
        const auto [c1, c2] = eec::schoenberg_c1_c2(m.coeffs(), m.order());
        CHECK(c1 == m.c1());
        CHECK(c2 == m.c2());
    }
}

TEST_CASE("geometric schoenberg variance fractions")
{
    const auto m = SchoenbergModel::geometric(2, 0.3);
    const auto& a = m.coeffs();
    REQUIRE(a.size() >= 3);
    const double f0 = a[0] * eec::schoenberg_basis_at_one(0, m.order());
    const double f1 = a[1] * eec::schoenberg_basis_at_one(1, m.order());
    const double f2 = a[2] * eec::schoenberg_basis_at_one(2, m.order());
    CHECK(f1 / f0 == doctest::Approx(0.3));
    CHECK(f2 / f1 == doctest::Approx(0.3));
    CHECK(std::pow(0.3, static_cast<double>(a.size())) < 1e-12);
    CHECK_THROWS_AS(SchoenbergModel::geometric(2, 0.9), eec::ModelError);
    CHECK_THROWS_AS(SchoenbergModel::geometric(2, 1.0), eec::ModelError);
}

TEST_CASE("invalid schoenberg coefficients are rejected")
{
    CHECK_THROWS_AS(SchoenbergModel::from_coefficients(2, {}), eec::ModelError);
    CHECK_THROWS_AS(SchoenbergModel::from_coefficients(2, {1.0}), eec::ModelError);
    CHECK_THROWS_AS(SchoenbergModel::from_coefficients(2, {0.5, -0.5}), eec::ModelError);
    CHECK_THROWS_AS(SchoenbergModel::from_coefficients(2, std::vector<double>(52, 1.0)), eec::ModelError);
    CHECK_THROWS_AS(eec::schoenberg_c1_c2(std::vector<double>{}, 0.5), eec::DomainError);
}
