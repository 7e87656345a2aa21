#include "eec/orthant.hpp"

#include "eec/errors.hpp"
#include "eec/matrixcalc.hpp"
#include "eec/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace eec {

double bivariate_normal_cdf(double h, double k, double rho)
{
    if (rho >= 1.0 - 1e-15)
        return normal_cdf(std::min(h, k));
    if (rho <= -1.0 + 1e-15)
        return std::max(0.0, normal_cdf(h) + normal_cdf(k) - 1.0);
    const double base = normal_cdf(h) * normal_cdf(k);
    if (rho == 0.0)
        return base;
    const double upper = std::asin(rho);
    constexpr int panels = 8;
    constexpr int nodes = 20;
    const double width = upper / panels;
    const double hk2 = h * h + k * k;
    double integral = 0.0;
    for (int p = 0; p < panels; ++p) {
        const QuadRule q = gauss_legendre(nodes, p * width, (p + 1) * width);
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double s = std::sin(q.nodes[i]);
            const double c2 = 1.0 - s * s;
            integral += q.weights[i] * std::exp(-(hk2 - 2.0 * h * k * s) / (2.0 * c2));
        }
    }
    return base + integral / (2.0 * std::numbers::pi);
}

namespace {

// P{V <= h} for a standard trivariate normal with correlation r.
double trivariate_normal_cdf(const std::array<double, 3>& h, const Eigen::Matrix3d& r)
{
    // Condition on the coordinate least correlated with the other two.
    int c = 0;
    double best = 2.0;
    for (int i = 0; i < 3; ++i) {
        double worst = 0.0;
        for (int j = 0; j < 3; ++j)
            if (j != i)
                worst = std::max(worst, std::abs(r(i, j)));
        if (worst < best) {
            best = worst;
            c = i;
        }
    }
    const int a = (c + 1) % 3;
    const int b = (c + 2) % 3;
    const double rca = r(c, a);
    const double rcb = r(c, b);
    const double sa = std::sqrt(std::max(0.0, 1.0 - rca * rca));
    const double sb = std::sqrt(std::max(0.0, 1.0 - rcb * rcb));
    double rho = (r(a, b) - rca * rcb) / (sa * sb);
    rho = std::clamp(rho, -1.0, 1.0);

    const double hi = std::min(h[c], 9.5);
    const double lo = std::min(-9.5, hi - 2.0);
    const int panels = std::max(1, static_cast<int>(std::ceil(hi - lo)));
    const double width = (hi - lo) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const QuadRule q = gauss_legendre(20, lo + p * width, lo + (p + 1) * width);
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double z = q.nodes[i];
            const double ha = (h[a] - rca * z) / sa;
            const double hb = (h[b] - rcb * z) / sb;
            total += q.weights[i] * normal_pdf(z) * bivariate_normal_cdf(ha, hb, rho);
        }
    }
    return total;
}

constexpr std::array<int, 32> primes = {2,  3,  5,  7,  11, 13, 17, 19,  23,  29,  31,  37,  41,  43,  47,  53,
                                        59, 61, 67, 71, 73, 79, 83, 89,  97,  101, 103, 107, 109, 113, 127, 131};

OrthantResult genz_qmc(const Eigen::VectorXd& h, const Eigen::MatrixXd& r, std::size_t points)
{
    const auto d = h.size();
    if (d - 1 > static_cast<Eigen::Index>(primes.size()))
        throw DomainError("orthant probability: dimension above 33 is not supported");
    // Most restrictive limits first.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return h(x) < h(y); });
    Eigen::VectorXd hs(d);
    Eigen::MatrixXd rs(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        hs(i) = h(order[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < d; ++j)
            rs(i, j) = r(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(rs + 1e-14 * Eigen::MatrixXd::Identity(d, d));
    if (llt.info() != Eigen::Success)
        throw NumericError("orthant probability: correlation matrix is not positive definite");
    const Eigen::MatrixXd l = llt.matrixL();

    constexpr int shifts = 8;
    const std::size_t per_shift = std::max<std::size_t>(1, (points + shifts - 1) / shifts);
    std::vector<double> alpha(static_cast<std::size_t>(d - 1));
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        const double s = std::sqrt(static_cast<double>(primes[j]));
        alpha[j] = s - std::floor(s);
    }
    std::mt19937_64 rng(0x5EEDu);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::array<double, shifts> estimates{};
    std::vector<double> y(static_cast<std::size_t>(d));
    for (int s = 0; s < shifts; ++s) {
        std::vector<double> shift(alpha.size());
        for (double& v : shift)
            v = unif(rng);
        double sum = 0.0;
        for (std::size_t k = 1; k <= per_shift; ++k) {
            double e = normal_cdf(hs(0) / l(0, 0));
            double f = e;
            for (Eigen::Index i = 1; i < d && f > 0.0; ++i) {
                double w = std::fmod(static_cast<double>(k) * alpha[static_cast<std::size_t>(i - 1)] +
                                         shift[static_cast<std::size_t>(i - 1)],
                                     1.0);
                w = 1.0 - std::abs(2.0 * w - 1.0);  // baker's transform
                const double p = std::clamp(w * e, 1e-300, 1.0 - 1e-16);
                y[static_cast<std::size_t>(i - 1)] = normal_quantile(p);
                double t = 0.0;
                for (Eigen::Index j = 0; j < i; ++j)
                    t += l(i, j) * y[static_cast<std::size_t>(j)];
                e = normal_cdf((hs(i) - t) / l(i, i));
                f *= e;
            }
            sum += f;
        }
        estimates[static_cast<std::size_t>(s)] = sum / static_cast<double>(per_shift);
    }
    const double mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / shifts;
    double var = 0.0;
    for (double v : estimates)
        var += (v - mean) * (v - mean);
    var /= (shifts - 1);
    return {mean, 3.0 * std::sqrt(var / shifts)};
}

}  // namespace

OrthantResult positive_orthant_probability(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                           std::size_t qmc_points)
{
    const auto d = mean.size();
    if (cov.rows() != d || cov.cols() != d)
        throw DomainError("orthant probability: mean and covariance dimensions disagree");

    // Deterministic components contribute an indicator.
    const double scale = d > 0 ? std::max(1e-300, cov.diagonal().cwiseAbs().maxCoeff()) : 1.0;
    std::vector<Eigen::Index> random;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (cov(i, i) <= 1e-14 * scale) {
            if (mean(i) < 0.0)
                return {0.0, 0.0};
        } else {
            random.push_back(i);
        }
    }
    const auto m = static_cast<Eigen::Index>(random.size());
    if (m == 0)
        return {1.0, 0.0};

    // P{Y >= 0} = P{V <= mu / s} with V standard, same correlation.
    Eigen::VectorXd h(m);
    Eigen::MatrixXd r(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto a = random[static_cast<std::size_t>(i)];
        h(i) = mean(a) / std::sqrt(cov(a, a));
        for (Eigen::Index j = 0; j < m; ++j) {
            const auto b = random[static_cast<std::size_t>(j)];
            r(i, j) = cov(a, b) / std::sqrt(cov(a, a) * cov(b, b));
        }
    }

    bool independent = true;
    for (Eigen::Index i = 0; i < m && independent; ++i)
        for (Eigen::Index j = i + 1; j < m; ++j)
            if (std::abs(r(i, j)) > 1e-15) {
                independent = false;
                break;
            }
    if (independent) {
        double p = 1.0;
        for (Eigen::Index i = 0; i < m; ++i)
            p *= normal_cdf(h(i));
        return {p, 0.0};
    }

    switch (m) {
    case 1:
        return {normal_cdf(h(0)), 0.0};
    case 2:
        return {bivariate_normal_cdf(h(0), h(1), r(0, 1)), 0.0};
    case 3:
        return {trivariate_normal_cdf({h(0), h(1), h(2)}, r), 0.0};
    default:
        return genz_qmc(h, r, std::max<std::size_t>(qmc_points, std::size_t{1} << 16));
    }
}

}  // namespace eec
