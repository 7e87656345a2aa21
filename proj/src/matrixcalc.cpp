#include "eec/matrixcalc.hpp"

#include "eec/errors.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace eec {

SymMatrix SymMatrix::identity(Eigen::Index n)
{
    SymMatrix s;
    s.m_ = Eigen::MatrixXd::Identity(n, n);
    return s;
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d)
{
    SymMatrix s;
    s.m_ = d.asDiagonal();
    return s;
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m, double tol)
{
    if (m.rows() != m.cols())
        throw DomainError("SymMatrix: matrix is not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i + 1; j < m.cols(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol * scale)
                throw DomainError("SymMatrix: entries (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") and its transpose differ");
    SymMatrix s;
    s.m_ = 0.5 * (m + m.transpose());
    return s;
}

std::uint64_t factorial(int n)
{
    if (n < 0 || n > 20)
        throw DomainError("factorial: argument " + std::to_string(n) + " outside [0, 20]");
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i)
        f *= static_cast<std::uint64_t>(i);
    return f;
}

double gaussian_tail(double x)
{
    // erfc keeps full relative accuracy deep into the upper tail; it
    // underflows to 0 just below x = 38.5.
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double normal_pdf(double x)
{
    constexpr double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("normal_quantile: p must lie in (0, 1)");
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double hermite(int n, double x)
{
    if (n < -1)
        throw DomainError("hermite: order " + std::to_string(n) + " < -1");
    if (n == -1)
        return std::sqrt(2.0 * std::numbers::pi) * gaussian_tail(x) * std::exp(0.5 * x * x);
    if (n == 0)
        return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int k = 1; k < n; ++k) {
        const double next = x * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

double subset_det(const Eigen::MatrixXd& m, unsigned mask, int n)
{
    int idx[32];
    int k = 0;
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i))
            idx[k++] = i;
    switch (k) {
    case 0:
        return 1.0;
    case 1:
        return m(idx[0], idx[0]);
    case 2:
        return m(idx[0], idx[0]) * m(idx[1], idx[1]) - m(idx[0], idx[1]) * m(idx[1], idx[0]);
    default: {
        Eigen::MatrixXd sub(k, k);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                sub(a, b) = m(idx[a], idx[b]);
        return sub.determinant();
    }
    }
}

}  // namespace

std::vector<double> minor_sums(const SymMatrix& b)
{
    const int n = static_cast<int>(b.dim());
    if (n > 20)
        throw DomainError("minor_sums: dimension above 20 is not supported");
    std::vector<double> s(static_cast<std::size_t>(n) + 1, 0.0);
    const unsigned count = 1u << n;
    for (unsigned mask = 0; mask < count; ++mask)
        s[static_cast<std::size_t>(std::popcount(mask))] += subset_det(b.dense(), mask, n);
    return s;
}

double minor_sum(const SymMatrix& b, int j)
{
    const int n = static_cast<int>(b.dim());
    if (j < 0 || j > n)
        throw DomainError("minor_sum: order " + std::to_string(j) + " outside [0, " + std::to_string(n) + "]");
    if (j == 0)
        return 1.0;
    double s = 0.0;
    const unsigned count = 1u << n;
    for (unsigned mask = 0; mask < count; ++mask)
        if (std::popcount(mask) == j)
            s += subset_det(b.dense(), mask, n);
    return s;
}

double expected_det_delta(const SymMatrix& b, double x)
{
    const int n_dim = static_cast<int>(b.dim());
    const std::vector<double> s = minor_sums(b);
    double total = 0.0;
    double xpow = 1.0;  // x^{N-n}, accumulated from n = N downwards
    for (int n = n_dim; n >= 0; --n) {
        const int r = n_dim - n;
        double inner = 0.0;
        for (int k = 0; 2 * k <= n; ++k) {
            const double c = static_cast<double>(factorial(r + 2 * k)) /
                             (static_cast<double>(factorial(k)) * std::ldexp(1.0, k));
            inner += ((k % 2) ? -c : c) * s[static_cast<std::size_t>(n - 2 * k)];
        }
        const double lead = ((r % 2) ? -1.0 : 1.0) / static_cast<double>(factorial(r));
        total += lead * inner * xpow;
        xpow *= x;
    }
    return total;
}

double expected_det_xi(const SymMatrix& b, double x)
{
    const int n_dim = static_cast<int>(b.dim());
    const std::vector<double> s = minor_sums(b);
    double total = 0.0;
    double xpow = 1.0;
    for (int n = n_dim; n >= 0; --n) {
        const int r = n_dim - n;
        total += ((r % 2) ? -1.0 : 1.0) * s[static_cast<std::size_t>(n)] * xpow;
        xpow *= x;
    }
    return total;
}

namespace {

double wick_recursive(const Eigen::MatrixXd& cov, std::vector<int>& rest)
{
    if (rest.empty())
        return 1.0;
    const int first = rest.front();
    double total = 0.0;
    for (std::size_t p = 1; p < rest.size(); ++p) {
        const double c = cov(first, rest[p]);
        if (c == 0.0)
            continue;
        std::vector<int> sub;
        sub.reserve(rest.size() - 2);
        for (std::size_t q = 1; q < rest.size(); ++q)
            if (q != p)
                sub.push_back(rest[q]);
        total += c * wick_recursive(cov, sub);
    }
    return total;
}

}  // namespace

double wick_moment(const Eigen::MatrixXd& cov, std::span<const int> indices)
{
    if (cov.rows() != cov.cols())
        throw DomainError("wick_moment: covariance is not square");
    if (indices.empty())
        throw DomainError("wick_moment: empty index list");
    for (int i : indices)
        if (i < 0 || i >= cov.rows())
            throw DomainError("wick_moment: index " + std::to_string(i) + " out of range");
    if (indices.size() % 2 == 1)
        return 0.0;
    std::vector<int> rest(indices.begin(), indices.end());
    return wick_recursive(cov, rest);
}

SymmetricEigen jacobi_eigen(const SymMatrix& b)
{
    const Eigen::Index n = b.dim();
    Eigen::MatrixXd a = b.dense();
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double frob = a.norm();
    const double tol = 1e-13 * frob;

    for (int sweep = 0; sweep < 100 && frob > 0.0; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q)
                off += 2.0 * a(p, q) * a(p, q);
        if (std::sqrt(off) <= tol)
            break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) < 1e-300)
                    continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
                const double c = 1.0 / std::hypot(t, 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    // Sort ascending.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) { return a(l, l) < a(r, r); });
    SymmetricEigen out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
        out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

SymMatrix principal_sqrt_inv(const SymMatrix& b)
{
    const Eigen::Index n = b.dim();
    if (n == 0)
        return SymMatrix(0);
    const SymmetricEigen eig = jacobi_eigen(b);
    const double norm = eig.values.cwiseAbs().maxCoeff();
    const double smallest = eig.values(0);
    if (!(smallest > 1e-12 * norm))
        throw SingularityError("principal_sqrt_inv: matrix is not positive definite (smallest eigenvalue " +
                                   std::to_string(smallest) + ")",
                               smallest);
    const Eigen::VectorXd inv_root = eig.values.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd q = eig.vectors * inv_root.asDiagonal() * eig.vectors.transpose();
    return SymMatrix::from_dense(0.5 * (q + q.transpose()), 1e-8);
}

}  // namespace eec
