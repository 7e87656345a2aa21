#include "eec/matrix_oracle.hpp"

#include "eec/errors.hpp"
#include "eec/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace eec {

namespace {

int delta(int a, int b) { return a == b ? 1 : 0; }

std::vector<std::pair<int, int>> upper_entries(int n)
{
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            e.emplace_back(i, j);
    return e;
}

// Lower Cholesky factor; on a non-positive pivot retries with jitter 1e-12
// relative to the largest diagonal entry.
Eigen::MatrixXd factor_with_jitter(const Eigen::MatrixXd& cov)
{
    const Eigen::Index m = cov.rows();
    const double scale = std::max(1e-300, cov.diagonal().cwiseAbs().maxCoeff());
    for (double jitter : {0.0, 1e-12}) {
        Eigen::MatrixXd a = cov;
        a.diagonal().array() += jitter * scale;
        Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m, m);
        bool ok = true;
        for (Eigen::Index j = 0; j < m && ok; ++j) {
            double d = a(j, j) - l.row(j).head(j).squaredNorm();
            if (d <= 1e-14 * scale) {
                if (d < -1e-10 * scale || jitter == 0.0) {
                    ok = false;
                    break;
                }
                d = 0.0;
            }
            l(j, j) = std::sqrt(d);
            for (Eigen::Index i = j + 1; i < m; ++i)
                l(i, j) = d > 0.0 ? (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j) : 0.0;
        }
        if (ok)
            return l;
    }
    throw NumericError("mc_expected_det: entry covariance is not positive semi-definite");
}

double small_det(const Eigen::MatrixXd& m)
{
    switch (m.rows()) {
    case 1:
        return m(0, 0);
    case 2:
        return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
        return m.determinant();
    }
}

}  // namespace

MatrixCovariance MatrixCovariance::isotropic(int dim, MatrixKind kind, double nu)
{
    MatrixCovariance c;
    c.dim = dim;
    c.kind = kind;
    c.fourth_moment = [nu](int i, int j, int k, int l) {
        return nu * (delta(i, j) * delta(k, l) + delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k));
    };
    return c;
}

Eigen::MatrixXd MatrixCovariance::entry_covariance() const
{
    const auto e = upper_entries(dim);
    const auto m = static_cast<Eigen::Index>(e.size());
    Eigen::MatrixXd cov(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) {
            const auto [i, j] = e[static_cast<std::size_t>(a)];
            const auto [k, l] = e[static_cast<std::size_t>(b)];
            double v = fourth_moment(i, j, k, l);
            if (kind == MatrixKind::Delta)
                v -= delta(i, j) * delta(k, l);
            cov(a, b) = v;
        }
    return cov;
}

double MatrixCovariance::symmetry_defect() const
{
    double worst = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                for (int l = 0; l < dim; ++l) {
                    std::array<int, 4> p{i, j, k, l};
                    std::sort(p.begin(), p.end());
                    const double ref = fourth_moment(i, j, k, l);
                    do {
                        worst = std::max(worst, std::abs(fourth_moment(p[0], p[1], p[2], p[3]) - ref));
                    } while (std::next_permutation(p.begin(), p.end()));
                }
    return worst;
}

McEstimate mc_expected_det(const MatrixCovariance& law, const SymMatrix& b, double x, std::size_t samples,
                           std::uint64_t seed)
{
    if (law.dim != b.dim())
        throw DomainError("mc_expected_det: dimension mismatch");
    if (samples < 2)
        throw DomainError("mc_expected_det: need at least two samples");
    const int n = law.dim;
    const auto entries = upper_entries(n);
    const Eigen::MatrixXd l = factor_with_jitter(law.entry_covariance());
    const auto m = l.rows();
    Eigen::MatrixXd shift = b.dense();
    shift.diagonal().array() -= x;

    constexpr std::size_t block = 4096;
    const std::size_t blocks = (samples + block - 1) / block;
    std::vector<double> sums(blocks, 0.0);
    std::vector<double> sq_sums(blocks, 0.0);

    parallel_for(blocks, [&](std::size_t bi) {
        std::mt19937_64 rng(derive_seed(seed, bi));
        std::normal_distribution<double> normal;
        const std::size_t count = std::min(block, samples - bi * block);
        Eigen::VectorXd z(m);
        Eigen::MatrixXd mat(n, n);
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t r = 0; r < count; ++r) {
            for (Eigen::Index a = 0; a < m; ++a)
                z(a) = normal(rng);
            const Eigen::VectorXd v = l.triangularView<Eigen::Lower>() * z;
            for (std::size_t a = 0; a < entries.size(); ++a) {
                const auto [i, j] = entries[a];
                mat(i, j) = v(static_cast<Eigen::Index>(a));
                mat(j, i) = v(static_cast<Eigen::Index>(a));
            }
            const double d = small_det(mat + shift);
            s += d;
            s2 += d * d;
        }
        sums[bi] = s;
        sq_sums[bi] = s2;
    });

    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t bi = 0; bi < blocks; ++bi) {
        s += sums[bi];
        s2 += sq_sums[bi];
    }
    const double nn = static_cast<double>(samples);
    const double mean = s / nn;
    const double var = std::max(0.0, (s2 - nn * mean * mean) / (nn - 1.0));
    return {mean, std::sqrt(var / nn), samples};
}

}  // namespace eec
