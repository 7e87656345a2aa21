#include "eec/identities.hpp"

#include "eec/errors.hpp"
#include "eec/matrixcalc.hpp"
#include "eec/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

namespace eec::oracle {

double hermite_tail_integral(int n, double u)
{
    boost::math::quadrature::exp_sinh<double> integrator;
    auto f = [&](double s) {
        const double x = u + s;
        const double w = std::exp(-0.5 * x * x);
        return w == 0.0 ? 0.0 : hermite(n, x) * w;
    };
    return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
}

double hermite_expansion(int n, double x)
{
    double total = 0.0;
    for (int k = 0; 2 * k <= n; ++k) {
        const double denom = std::tgamma(k + 1.0) * std::ldexp(1.0, k) * std::tgamma(n - 2.0 * k + 1.0);
        total += hermite(n - 2 * k, x) / denom;
    }
    return std::tgamma(n + 1.0) * total;
}

double wick_by_permutations(const Eigen::MatrixXd& cov, std::span<const int> indices)
{
    const auto n = static_cast<int>(indices.size());
    if (n > 10)
        throw DomainError("permutation oracle limited to 10 factors");
    if (n % 2)
        return 0.0;
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    double total = 0.0;
    do {
        double prod = 1.0;
        for (int p = 0; p < n; p += 2)
            prod *= cov(indices[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])],
                        indices[static_cast<std::size_t>(order[static_cast<std::size_t>(p + 1)])]);
        total += prod;
    } while (std::next_permutation(order.begin(), order.end()));
    const int k = n / 2;
    return total / (std::ldexp(1.0, k) * std::tgamma(k + 1.0));
}

double gegenbauer_by_contour(int n, double lambda, double x)
{
    if (!(lambda > 0.0))
        throw DomainError("contour oracle needs lambda > 0");
    // 1 - 2 r x + r^2 = (1 - r e^{ia})(1 - r e^{-ia}) with x = cos a; each
    // factor has positive real part on |r| < 1, so principal powers are
    // analytic there.
    const std::complex<double> e = std::polar(1.0, std::acos(std::clamp(x, -1.0, 1.0)));
    constexpr int m = 256;
    constexpr double radius = 0.5;
    std::complex<double> sum = 0.0;
    for (int j = 0; j < m; ++j) {
        const std::complex<double> r = std::polar(radius, 2.0 * std::numbers::pi * j / m);
        const std::complex<double> g = std::pow(1.0 - r * e, -lambda) * std::pow(1.0 - r * std::conj(e), -lambda);
        sum += g * std::pow(r, -n);
    }
    return sum.real() / m;
}

double sphere_measure(int n, int nodes)
{
    if (n < 1)
        throw DomainError("sphere dimension must be positive");
    const QuadRule q = gauss_legendre(nodes, 0.0, std::numbers::pi);
    double total = 2.0 * std::numbers::pi;
    for (int i = 1; i < n; ++i) {
        double axis = 0.0;
        for (std::size_t p = 0; p < q.size(); ++p)
            axis += q.weights[p] * std::pow(std::sin(q.nodes[p]), n - i);
        total *= axis;
    }
    return total;
}

}  // namespace eec::oracle
