#include "oracles.hpp"

#include "eec/errors.hpp"
#include "eec/sphere_eec.hpp"

#include <doctest.h>

using eec::ChartMean;
using eec::MeanFunction;
using eec::SchoenbergModel;

namespace {

constexpr double pi = std::numbers::pi;

Eigen::VectorXd vec(std::initializer_list<double> v)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v)
        out(i++) = x;
    return out;
}

MeanFunction zonal(int dim, double c, double a, double freq)
{
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    w(0) = freq;
    return MeanFunction::cosine_product(dim, c, {a}, {w});
}

// Orthonormal frame on S^2 at chart point (th1, th2), as embedded vectors.
Eigen::Matrix3d frame_s2(double th1, double th2)
{
    Eigen::Matrix3d e;
    e.col(0) << -std::sin(th1), std::cos(th1) * std::cos(th2), std::cos(th1) * std::sin(th2);
    e.col(1) << 0.0, -std::sin(th2), std::cos(th2);
    e.col(2) << std::cos(th1), std::sin(th1) * std::cos(th2), std::sin(th1) * std::sin(th2);
    return e;
}

}  // namespace

TEST_CASE("chart conversions round trip on the unit sphere")
{
    for (const auto& th : {vec({0.3}), vec({0.4, 5.5}), vec({1.0, 2.0, 0.7}), vec({0.2, 2.9, 1.1, 4.0})}) {
        const Eigen::VectorXd t = eec::chart_to_embedding(th);
        CHECK(t.size() == th.size() + 1);
        CHECK(t.norm() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK((eec::embedding_to_chart(t) - th).norm() <= 1e-12);
    }
    CHECK_THROWS_AS(eec::embedding_to_chart(vec({1.0, 1.0, 0.0})), eec::DomainError);
}

TEST_CASE("jacobian integrates to the sphere area")
{
    CHECK(eec::sphere_area(0) == doctest::Approx(2.0));
    CHECK(eec::sphere_area(1) == doctest::Approx(2 * pi));
    CHECK(eec::sphere_area(2) == doctest::Approx(4 * pi));
    CHECK(eec::sphere_area(3) == doctest::Approx(2 * pi * pi));
    // int phi = 2 pi prod_i int_0^pi sin^{N-i}; other colatitudes sit at pi/2.
    for (int n = 2; n <= 4; ++n) {
        double total = 2 * pi;
        for (int i = 1; i < n; ++i)
            total *= oracle::integrate(
                [&](double s) {
                    Eigen::VectorXd th = Eigen::VectorXd::Constant(n, pi / 2);
                    th(i - 1) = s;
                    return eec::chart_jacobian(th);
                },
                0.0, pi);
        CHECK(total == doctest::Approx(eec::sphere_area(n)).epsilon(1e-12));
    }
}

TEST_CASE("Lipschitz-Killing curvatures and EC densities")
{
    CHECK(eec::lk_curvature(0, 2) == doctest::Approx(2.0));
    CHECK(eec::lk_curvature(1, 2) == 0.0);
    CHECK(eec::lk_curvature(2, 2) == doctest::Approx(4 * pi));
    CHECK(eec::lk_curvature(0, 1) == 0.0);
    CHECK(eec::lk_curvature(1, 1) == doctest::Approx(2 * pi));
    CHECK(eec::lk_curvature(3, 3) == doctest::Approx(2 * pi * pi));
    CHECK(eec::lk_curvature(1, 3) == doctest::Approx(2 * 3 * 2 * pi * pi / (4 * pi)));
    CHECK_THROWS_AS(eec::lk_curvature(3, 2), eec::DomainError);

    CHECK(eec::rho(0, 1.3) == doctest::Approx(oracle::psi(1.3)));
    CHECK(eec::rho(1, 0.0) == doctest::Approx(1 / (2 * pi)));
    CHECK(eec::rho(2, 1.5) == doctest::Approx(std::pow(2 * pi, -1.5) * 1.5 * std::exp(-1.125)));
}

TEST_CASE("centered closed form: circle and two-sphere")
{
    for (double r : {0.2, 0.4}) {
        const auto circle = SchoenbergModel::geometric(1, r);
        const auto s2 = SchoenbergModel::geometric(2, r);
        for (double u : {0.5, 2.0}) {
            CHECK(eec::centered_sphere_closed_form(circle, u) ==
                  doctest::Approx(std::sqrt(circle.c1()) * std::exp(-0.5 * u * u)).epsilon(1e-14));
            const double ref = 2 * oracle::psi(u) + 4 * pi * s2.c1() * std::pow(2 * pi, -1.5) * u * std::exp(-0.5 * u * u);
            CHECK(eec::centered_sphere_closed_form(s2, u) == doctest::Approx(ref).epsilon(1e-14));
        }
    }
}

TEST_CASE("centered quadrature matches the closed form for N = 1..3")
{
    for (int n = 1; n <= 3; ++n) {
        const auto model = SchoenbergModel::geometric(n, 0.3);
        const ChartMean flat(MeanFunction::constant(n, 0.0));
        for (double u : {1.0, 2.0, 3.0}) {
            const auto r = eec::expected_euler_sphere(model, flat, u);
            CHECK(oracle::relative(r.total, r.closed_form) <= 1e-6);
            CHECK(r.closed_form == eec::centered_sphere_closed_form(model, u));
            CHECK(r.c1 == model.c1());
        }
    }
    const auto r = eec::expected_euler_sphere(SchoenbergModel::geometric(2, 0.3), ChartMean(zonal(2, 0.0, 0.5, 1.0)), 1.0);
    CHECK(std::isnan(r.closed_form));
}

TEST_CASE("constant mean shifts the level")
{
    const auto model = SchoenbergModel::geometric(2, 0.3);
    const double shifted = eec::expected_euler_sphere(model, ChartMean(MeanFunction::constant(2, 0.7)), 2.5).total;
    CHECK(oracle::relative(shifted, eec::centered_sphere_closed_form(model, 1.8)) <= 1e-6);
}

TEST_CASE("circle with a non-constant mean matches direct Kac-Rice quadrature")
{
    // On S^1 the chart is arc length, so the count of upcrossing maxima is
    // int dth sqrt(C') phi(m'/sqrt(C')) [phi(u - m) - m''/C' Psi(u - m)].
    const auto model = SchoenbergModel::geometric(1, 0.3);
    const double c1 = model.c1();
    const double a = 0.8;
    const ChartMean mean(zonal(1, 0.2, a, 1.0));
    for (double u : {1.5, 2.5}) {
        const double ref = oracle::integrate(
            [&](double th) {
                const double m = 0.2 + a * std::cos(th);
                const double g = -a * std::sin(th);
                const double h = -a * std::cos(th);
                const double z = u - m;
                return std::sqrt(c1) * std::exp(-0.5 * g * g / c1) / std::sqrt(2 * pi) *
                       (std::exp(-0.5 * z * z) / std::sqrt(2 * pi) - h / c1 * oracle::psi(z));
            },
            0.0, 2 * pi);
        CHECK(oracle::relative(eec::expected_euler_sphere(model, mean, u).total, ref) <= 1e-8);
    }
}

TEST_CASE("frame derivatives equal the intrinsic gradient and Hessian of the embedded function")
{
    // m = cos th1 = t_1 and m = cos 2 th1 = 2 t_1^2 - 1 on S^2:
    // grad = e^T dF, Hess = e^T d2F e - (t . dF) I.
    const auto lin = zonal(2, 0.0, 1.0, 1.0);
    const auto quad = zonal(2, 0.0, 1.0, 2.0);
    for (double th1 : {0.3, 1.2, 2.6})
        for (double th2 : {0.5, 4.0}) {
            const Eigen::Matrix3d f = frame_s2(th1, th2);
            const Eigen::Matrix<double, 3, 2> e = f.leftCols<2>();
            const Eigen::Vector3d t = f.col(2);

            const Eigen::Vector3d d_lin(1.0, 0.0, 0.0);
            const auto fl = eec::frame_derivatives(lin, vec({th1, th2}));
            CHECK((fl.grad - e.transpose() * d_lin).norm() <= 1e-12);
            CHECK((fl.hess - (-t.dot(d_lin)) * Eigen::Matrix2d::Identity()).norm() <= 1e-12);

            const Eigen::Vector3d d_quad(4 * t(0), 0.0, 0.0);
            Eigen::Matrix3d dd_quad = Eigen::Matrix3d::Zero();
            dd_quad(0, 0) = 4.0;
            const auto fq = eec::frame_derivatives(quad, vec({th1, th2}));
            CHECK((fq.grad - e.transpose() * d_quad).norm() <= 1e-12);
            const Eigen::Matrix2d ref = e.transpose() * dd_quad * e - t.dot(d_quad) * Eigen::Matrix2d::Identity();
            CHECK((fq.hess - ref).norm() <= 1e-12);
        }
}

TEST_CASE("frame and chart derivatives agree on the equator")
{
    const auto m = MeanFunction::cosine_product(3, 0.0, {0.6, 0.3}, {vec({1.0, 0.0, 0.0}), vec({2.0, 0.0, 0.0})});
    const Eigen::VectorXd th = vec({pi / 2, pi / 2, 1.3});
    const auto fd = eec::frame_derivatives(m, th);
    CHECK((fd.grad - m.grad(th)).norm() <= 1e-12);
    CHECK((fd.hess - m.hess(th)).norm() <= 1e-12);
}

TEST_CASE("unit C' drops every (C' - 1) term")
{
    Eigen::MatrixXd h(3, 3);
    h << 1.0, 0.2, -0.3, 0.2, -0.5, 0.4, -0.3, 0.4, 2.0;
    const auto b = eec::SymMatrix::from_dense(h);
    const auto c = eec::sphere_polynomial(b, 1.0);
    for (int j = 0; j <= 3; ++j) {
        const double sign = j % 2 ? -1.0 : 1.0;
        CHECK(c[static_cast<std::size_t>(j)] == doctest::Approx(sign * oracle::minor_sum(h, j)).epsilon(1e-14));
    }
    // Near one the general expression is continuous.
    const auto near = eec::sphere_polynomial(b, 1.0 + 1e-9);
    for (int j = 0; j <= 3; ++j)
        CHECK(near[static_cast<std::size_t>(j)] == doctest::Approx(c[static_cast<std::size_t>(j)]).epsilon(1e-7));
}

TEST_CASE("the longitude origin of the quadrature does not matter")
{
    const auto model = SchoenbergModel::geometric(2, 0.3);
    const ChartMean mean(zonal(2, 0.0, 1.0, 1.0));
    eec::SphereQuadrature shifted;
    shifted.longitude_offset = 0.37;
    const double a = eec::expected_euler_sphere(model, mean, 2.0).total;
    const double b = eec::expected_euler_sphere(model, mean, 2.0, shifted).total;
    CHECK(oracle::relative(a, b) <= 1e-12);
}

TEST_CASE("node refinement converges for a zonal mean")
{
    const auto model = SchoenbergModel::geometric(2, 0.3);
    const ChartMean mean(zonal(2, 0.0, 1.0, 1.0));
    eec::SphereQuadrature fine;
    fine.colatitude_nodes *= 2;
    fine.nodes_x *= 2;
    CHECK(oracle::relative(eec::expected_euler_sphere(model, mean, 2.5).total,
                           eec::expected_euler_sphere(model, mean, 2.5, fine).total) <= 1e-6);
}

TEST_CASE("chart means must be periodic and single valued at the poles")
{
    const ChartMean good(zonal(2, 0.0, 1.0, 1.0));
    CHECK(good.periodic());
    CHECK(good.pole_regular());
    const ChartMean aperiodic(MeanFunction::cosine_product(2, 0.0, {1.0}, {vec({0.0, 0.5})}));
    CHECK_FALSE(aperiodic.periodic());
    const ChartMean polar(MeanFunction::cosine_product(2, 0.0, {1.0}, {vec({0.0, 1.0})}));
    CHECK_FALSE(polar.pole_regular());
    const auto model = SchoenbergModel::geometric(2, 0.3);
    CHECK_THROWS_AS(eec::expected_euler_sphere(model, aperiodic, 1.0), eec::DomainError);
    CHECK_THROWS_AS(eec::expected_euler_sphere(model, polar, 1.0), eec::DomainError);
    CHECK_THROWS_AS(eec::expected_euler_sphere(model, ChartMean(MeanFunction::constant(3, 0.0)), 1.0), eec::DomainError);
    eec::SphereQuadrature bad;
    bad.longitude_nodes = 0;
    CHECK_THROWS_AS(bad.validate(), eec::DomainError);
}
