#include "eec/sphere_eec.hpp"

#include "eec/errors.hpp"
#include "eec/matrixcalc.hpp"
#include "eec/parallel.hpp"
#include "eec/quadrature.hpp"
#include "x_integral.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace eec {

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

Eigen::VectorXd chart_to_embedding(const Eigen::VectorXd& theta)
{
    const auto n = theta.size();
    if (n < 1)
        throw DomainError("chart point must have at least one coordinate");
    Eigen::VectorXd t(n + 1);
    double s = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        t(i) = s * std::cos(theta(i));
        s *= std::sin(theta(i));
    }
    t(n) = s;
    return t;
}

Eigen::VectorXd embedding_to_chart(const Eigen::VectorXd& t)
{
    const auto n = t.size() - 1;
    if (n < 1)
        throw DomainError("embedded point must have at least two coordinates");
    if (std::abs(t.norm() - 1.0) > 1e-9)
        throw DomainError("embedded point is not on the unit sphere");
    Eigen::VectorXd theta(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double rest = t.tail(n - i).norm();
        theta(i) = std::atan2(rest, t(i));
    }
    double lon = std::atan2(t(n), t(n - 1));
    if (lon < 0.0)
        lon += 2.0 * pi;
    theta(n - 1) = lon;
    return theta;
}

double chart_jacobian(const Eigen::VectorXd& theta)
{
    const auto n = theta.size();
    double phi = 1.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        phi *= std::pow(std::sin(theta(i)), static_cast<double>(n - 1 - i));
    return phi;
}

namespace {

// Mesh values of one chart coordinate strictly inside its range.
std::vector<double> mesh(bool longitude)
{
    const double top = longitude ? 2.0 * pi : pi;
    return {0.13 * top, 0.37 * top, 0.61 * top, 0.89 * top};
}

bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * scale; }

bool finite_derivatives(const MeanFunction& m, const Eigen::VectorXd& th)
{
    return std::isfinite(m.eval(th)) && m.grad(th).allFinite() && m.hess(th).allFinite();
}

// Visits every point of the tensor mesh over coordinates [from, n).
template <class Fn>
void for_mesh(Eigen::VectorXd th, int from, int n, Fn&& fn)
{
    if (from == n) {
        fn(th);
        return;
    }
    for (double v : mesh(from == n - 1)) {
        th(from) = v;
        for_mesh(th, from + 1, n, fn);
    }
}

}  // namespace

ChartMean::ChartMean(MeanFunction mean) : mean_(std::move(mean))
{
    const int n = mean_.dim();
    if (n < 1)
        throw DomainError("chart mean needs a positive dimension");

    periodic_ = true;
    for_mesh(Eigen::VectorXd::Zero(n), 0, n, [&](const Eigen::VectorXd& th) {
        Eigen::VectorXd shifted = th;
        shifted(n - 1) += 2.0 * pi;
        const double scale = 1.0 + std::abs(mean_.eval(th)) + mean_.grad(th).norm() + mean_.hess(th).norm();
        const bool same = close(mean_.eval(th), mean_.eval(shifted), scale) &&
                          (mean_.grad(th) - mean_.grad(shifted)).norm() <= 1e-9 * scale &&
                          (mean_.hess(th) - mean_.hess(shifted)).norm() <= 1e-9 * scale;
        if (!same)
            periodic_ = false;
    });

    // At th_i in {0, pi} (i < N) the coordinates after i collapse, so the
    // mean must not depend on them there.
    pole_regular_ = true;
    for (int i = 0; i + 1 < n && pole_regular_; ++i) {
        for (double pole : {0.0, pi}) {
            for_mesh(Eigen::VectorXd::Zero(n), 0, i, [&](const Eigen::VectorXd& head) {
                Eigen::VectorXd th = head;
                th(i) = pole;
                double ref = std::numeric_limits<double>::quiet_NaN();
                for_mesh(th, i + 1, n, [&](const Eigen::VectorXd& p) {
                    if (!finite_derivatives(mean_, p)) {
                        pole_regular_ = false;
                        return;
                    }
                    const double v = mean_.eval(p);
                    if (std::isnan(ref))
                        ref = v;
                    else if (!close(v, ref, 1.0 + std::abs(ref)))
                        pole_regular_ = false;
                });
            });
        }
    }
}

void SphereQuadrature::validate() const
{
    if (colatitude_nodes < 1 || longitude_nodes < 1 || nodes_x < 1)
        throw DomainError("sphere quadrature: node counts must be positive");
    if (!std::isfinite(longitude_offset))
        throw DomainError("sphere quadrature: longitude offset must be finite");
}

std::vector<double> sphere_polynomial(const SymMatrix& hess, double c1)
{
    const int n = static_cast<int>(hess.dim());
    const std::vector<double> s = minor_sums(hess);
    const bool unit = std::abs(c1 - 1.0) <= 1e-12;
    std::vector<double> c(static_cast<std::size_t>(n + 1), 0.0);
    for (int j = 0; j <= n; ++j) {
        double inner = 0.0;
        for (int i = 0; 2 * i <= j; ++i) {
            if (unit && i > 0)
                break;
            double term = static_cast<double>(factorial(n - j + 2 * i)) /
                          (static_cast<double>(factorial(i)) * std::ldexp(1.0, i));
            term *= std::pow(c1, 0.5 * n - j + i) * s[static_cast<std::size_t>(j - 2 * i)];
            if (i > 0)
                term *= std::pow(c1 - 1.0, i);
            inner += (i % 2 ? -term : term);
        }
        c[static_cast<std::size_t>(j)] = ((j % 2) ? -inner : inner) / static_cast<double>(factorial(n - j));
    }
    return c;
}

MeanDerivatives frame_derivatives(const MeanFunction& mean, const Eigen::VectorXd& theta)
{
    const auto n = theta.size();
    const Eigen::VectorXd g = mean.grad(theta);
    const Eigen::MatrixXd d2 = mean.hess(theta);
    Eigen::VectorXd h(n);
    h(0) = 1.0;
    for (Eigen::Index i = 1; i < n; ++i)
        h(i) = h(i - 1) * std::sin(theta(i - 1));
    // Christoffel terms of the diagonal metric h_i^2: for j < i,
    // G^i_ij = cot th_j and G^j_ii = -(h_i / h_j)^2 cot th_j; all others vanish.
    Eigen::MatrixXd cov = d2;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < i; ++j) {
            const double cot = std::cos(theta(j)) / std::sin(theta(j));
            cov(i, i) += (h(i) * h(i)) / (h(j) * h(j)) * cot * g(j);
            cov(i, j) -= cot * g(i);
            cov(j, i) = cov(i, j);
        }
    MeanDerivatives out;
    out.grad = g.cwiseQuotient(h);
    out.hess = h.cwiseInverse().asDiagonal() * cov * h.cwiseInverse().asDiagonal();
    return out;
}

SphereReport expected_euler_sphere(const SchoenbergModel& model, const ChartMean& mean, double u,
                                   const SphereQuadrature& quad, BracketArgument arg, SphereDerivatives deriv)
{
    quad.validate();
    const int n = model.sphere_dim();
    if (n < 1 || n > 4)
        throw DomainError("sphere dimension must be between 1 and 4");
    if (mean.sphere_dim() != n)
        throw DomainError("chart mean dimension " + std::to_string(mean.sphere_dim()) + " does not match S^" +
                          std::to_string(n));
    if (!mean.periodic())
        throw DomainError("chart mean is not 2 pi periodic in the longitude");
    if (!mean.pole_regular())
        throw DomainError("chart mean is not single valued at the poles");
    if (!std::isfinite(u))
        throw DomainError("level u must be finite");

    const double c1 = model.c1();
    const QuadRule colat = gauss_legendre(quad.colatitude_nodes, 0.0, pi);
    const QuadRule lon = periodic_trapezoid(quad.longitude_nodes, 2.0 * pi, quad.longitude_offset);
    const QuadRule ref = gauss_legendre(quad.nodes_x);
    const double norm = std::pow(2.0 * pi, -0.5 * (n + 1));
    const MeanFunction& m = mean.mean();

    // One slice per first colatitude node (or a single slice on the circle),
    // each summed sequentially and then reduced in slice order.
    const std::size_t slices = n == 1 ? 1 : colat.size();
    std::size_t inner = lon.size();
    for (int i = 1; i + 1 < n; ++i)
        inner *= colat.size();
    std::vector<double> value(slices, 0.0);
    std::vector<double> tail(slices, 0.0);
    parallel_for(slices, [&](std::size_t s) {
        Eigen::VectorXd th(n);
        for (std::size_t p = 0; p < inner; ++p) {
            // Decode p into the remaining colatitudes and the longitude.
            std::size_t r = p;
            double w = 1.0;
            th(n - 1) = lon.nodes[r % lon.size()];
            w *= lon.weights[r % lon.size()];
            r /= lon.size();
            for (int i = n - 2; i >= 1; --i) {
                th(i) = colat.nodes[r % colat.size()];
                w *= colat.weights[r % colat.size()];
                r /= colat.size();
            }
            if (n > 1) {
                th(0) = colat.nodes[s];
                w *= colat.weights[s];
            }
            const MeanDerivatives d = deriv == SphereDerivatives::Frame ? frame_derivatives(m, th)
                                                                        : MeanDerivatives{m.grad(th), m.hess(th)};
            detail::NodeIntegrand in;
            in.m = m.eval(th);
            in.shift = arg == BracketArgument::Residual ? in.m : 0.0;
            in.scale = norm * w * chart_jacobian(th) * std::exp(-0.5 * d.grad.squaredNorm() / c1);
            in.coeffs = sphere_polynomial(SymMatrix::from_dense(d.hess, 1e-9), c1);
            const detail::XIntegral xi = detail::integrate_x(in, u, ref);
            if (std::isnan(xi.value))
                throw NumericError("sphere quadrature produced NaN");
            value[s] += xi.value;
            tail[s] += xi.tail;
        }
    });

    SphereReport report;
    report.u = u;
    report.c1 = c1;
    report.c2 = model.c2();
    for (std::size_t s = 0; s < slices; ++s) {
        report.total += value[s];
        report.tail_bound += tail[s];
    }
    report.quad_nodes_used = slices * inner * ref.size();
    report.closed_form =
        m.is_centered() ? centered_sphere_closed_form(model, u) : std::numeric_limits<double>::quiet_NaN();
    return report;
}

double sphere_area(int j)
{
    if (j < 0)
        throw DomainError("sphere_area: dimension must be nonnegative");
    return 2.0 * std::pow(pi, 0.5 * (j + 1)) / std::tgamma(0.5 * (j + 1));
}

double lk_curvature(int j, int n)
{
    if (n < 1 || j < 0 || j > n)
        throw DomainError("lk_curvature: need 0 <= j <= N and N >= 1");
    if ((n - j) % 2)
        return 0.0;
    double binom = 1.0;
    for (int i = 1; i <= j; ++i)
        binom = binom * (n - j + i) / i;
    return 2.0 * binom * sphere_area(n) / sphere_area(n - j);
}

double rho(int j, double u)
{
    if (j < 0)
        throw DomainError("rho: order must be nonnegative");
    if (j == 0)
        return gaussian_tail(u);
    return std::pow(2.0 * pi, -0.5 * (j + 1)) * hermite(j - 1, u) * std::exp(-0.5 * u * u);
}

double centered_sphere_closed_form(const SchoenbergModel& model, double u)
{
    const int n = model.sphere_dim();
    double total = 0.0;
    for (int j = 0; j <= n; ++j)
        total += std::pow(model.c1(), 0.5 * j) * lk_curvature(j, n) * rho(j, u);
    return total;
}

}  // namespace eec
