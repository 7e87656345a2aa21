#include "eec/simlab.hpp"

#include "eec/errors.hpp"
#include "eec/matrixcalc.hpp"
#include "eec/parallel.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <utility>

namespace eec {

GridDesign GridDesign::lattice(const Rectangle& t, std::vector<int> counts)
{
    const int n = t.dim();
    if (static_cast<int>(counts.size()) != n)
        throw DomainError("lattice: need one node count per axis");
    std::size_t total = 1;
    std::vector<int> stride(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (counts[static_cast<std::size_t>(i)] < 2)
            throw DomainError("lattice: every axis needs at least 2 nodes");
        stride[static_cast<std::size_t>(i)] = static_cast<int>(total);
        total *= static_cast<std::size_t>(counts[static_cast<std::size_t>(i)]);
        if (total > max_design_points)
            throw DomainError("lattice: more than 4000 design points");
    }

    GridDesign g;
    g.kind = Kind::Lattice;
    g.counts = counts;
    g.points.reserve(total);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (std::size_t p = 0; p < total; ++p) {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) {
            const double f = static_cast<double>(idx[static_cast<std::size_t>(i)]) / (counts[static_cast<std::size_t>(i)] - 1);
            x(i) = t.lo()(i) + f * (t.hi()(i) - t.lo()(i));
        }
        g.points.push_back(std::move(x));
        for (int i = 0; i < n; ++i) {
            if (++idx[static_cast<std::size_t>(i)] < counts[static_cast<std::size_t>(i)])
                break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }

    // d-cells: a base node plus every combination of unit steps along d axes.
    for (int d = 0; d <= n; ++d) {
        CellBlock block;
        block.dim = d;
        block.stride = 1 << d;
        for (unsigned axes = 0; axes < (1u << n); ++axes) {
            if (std::popcount(axes) != d)
                continue;
            std::vector<int> offsets;
            std::vector<int> members;
            for (int i = 0; i < n; ++i)
                if (axes & (1u << i))
                    members.push_back(stride[static_cast<std::size_t>(i)]);
            for (unsigned c = 0; c < (1u << d); ++c) {
                int off = 0;
                for (int b = 0; b < d; ++b)
                    if (c & (1u << b))
                        off += members[static_cast<std::size_t>(b)];
                offsets.push_back(off);
            }
            std::fill(idx.begin(), idx.end(), 0);
            for (std::size_t p = 0; p < total; ++p) {
                bool ok = true;
                int base = 0;
                for (int i = 0; i < n; ++i) {
                    base += idx[static_cast<std::size_t>(i)] * stride[static_cast<std::size_t>(i)];
                    if ((axes & (1u << i)) && idx[static_cast<std::size_t>(i)] == counts[static_cast<std::size_t>(i)] - 1)
                        ok = false;
                }
                if (ok)
                    for (int off : offsets)
                        block.vertices.push_back(base + off);
                for (int i = 0; i < n; ++i) {
                    if (++idx[static_cast<std::size_t>(i)] < counts[static_cast<std::size_t>(i)])
                        break;
                    idx[static_cast<std::size_t>(i)] = 0;
                }
            }
        }
        g.cells.push_back(std::move(block));
    }
    return g;
}

GridDesign GridDesign::icosphere(int level)
{
    if (level < 0 || level > 4)
        throw DomainError("icosphere: level must be between 0 and 4 (at most 4000 points)");
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    std::vector<Eigen::Vector3d> v = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
                                      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
                                      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    for (auto& p : v)
        p.normalize();
    std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                         {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                         {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                         {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (int s = 0; s < level; ++s) {
        std::map<std::pair<int, int>, int> mid;
        auto midpoint = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            const auto it = mid.find(key);
            if (it != mid.end())
                return it->second;
            v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
            const int id = static_cast<int>(v.size()) - 1;
            mid.emplace(key, id);
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(f.size() * 4);
        for (const auto& tri : f) {
            const int ab = midpoint(tri[0], tri[1]);
            const int bc = midpoint(tri[1], tri[2]);
            const int ca = midpoint(tri[2], tri[0]);
            next.push_back({tri[0], ab, ca});
            next.push_back({tri[1], bc, ab});
            next.push_back({tri[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        f = std::move(next);
    }

    GridDesign g;
    g.kind = Kind::Icosphere;
    g.level = level;
    for (const auto& p : v)
        g.points.emplace_back(p);
    CellBlock verts{0, 1, {}};
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
        verts.vertices.push_back(i);
    CellBlock edges{1, 2, {}};
    std::map<std::pair<int, int>, bool> seen;
    for (const auto& tri : f)
        for (int e = 0; e < 3; ++e) {
            const auto key = std::minmax(tri[static_cast<std::size_t>(e)], tri[static_cast<std::size_t>((e + 1) % 3)]);
            if (seen.emplace(key, true).second) {
                edges.vertices.push_back(key.first);
                edges.vertices.push_back(key.second);
            }
        }
    CellBlock faces{2, 3, {}};
    for (const auto& tri : f)
        faces.vertices.insert(faces.vertices.end(), tri.begin(), tri.end());
    g.cells = {std::move(verts), std::move(edges), std::move(faces)};
    return g;
}

long GridDesign::euler_characteristic() const
{
    long chi = 0;
    for (const CellBlock& b : cells)
        chi += (b.dim % 2 ? -1 : 1) * static_cast<long>(b.count());
    return chi;
}

FieldSampler::FieldSampler(const Eigen::MatrixXd& covariance, Eigen::VectorXd mean) : mean_(std::move(mean))
{
    const auto n = mean_.size();
    if (covariance.rows() != n || covariance.cols() != n)
        throw DomainError("sampler: covariance and mean sizes disagree");
    if (static_cast<std::size_t>(n) > max_design_points)
        throw DomainError("sampler: more than 4000 design points");
    const double scale = n > 0 ? covariance.diagonal().maxCoeff() : 1.0;
    for (double rel : {0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8}) {
        Eigen::MatrixXd a = covariance;
        a.diagonal().array() += rel * scale;
        Eigen::LLT<Eigen::MatrixXd> llt(a);
        if (llt.info() == Eigen::Success) {
            factor_ = llt.matrixL();
            jitter_ = rel * scale;
            return;
        }
    }
    throw NumericError("sampler: covariance is not positive semidefinite (Cholesky failed with jitter 1e-8)");
}

Eigen::MatrixXd FieldSampler::sample_block(std::uint64_t seed, std::uint64_t block, int count) const
{
    std::mt19937_64 rng(derive_seed(seed, block));
    std::normal_distribution<double> normal;
    Eigen::MatrixXd z(mean_.size(), count);
    for (Eigen::Index c = 0; c < z.cols(); ++c)
        for (Eigen::Index r = 0; r < z.rows(); ++r)
            z(r, c) = normal(rng);
    Eigen::MatrixXd x = factor_.triangularView<Eigen::Lower>() * z;
    x.colwise() += mean_;
    return x;
}

Eigen::MatrixXd sample_gaussian_field(const std::vector<Eigen::VectorXd>& points, const PointCovariance& cov,
                                      const PointMean& mean, int n_samples, std::uint64_t seed)
{
    if (n_samples < 0)
        throw DomainError("sample count must be nonnegative");
    const auto n = static_cast<Eigen::Index>(points.size());
    if (static_cast<std::size_t>(n) > max_design_points)
        throw DomainError("sampler: more than 4000 design points");
    Eigen::MatrixXd c(n, n);
    Eigen::VectorXd m(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i) = mean(points[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j <= i; ++j)
            c(i, j) = c(j, i) = cov(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
    }
    return FieldSampler(c, m).sample_block(seed, 0, n_samples);
}

namespace {

// Minimum vertex value of every cell, block by block.
void cell_minima(const GridDesign& design, const double* values, std::vector<std::vector<double>>& out)
{
    out.resize(design.cells.size());
    for (std::size_t b = 0; b < design.cells.size(); ++b) {
        const CellBlock& cb = design.cells[b];
        const std::size_t count = cb.count();
        out[b].resize(count);
        const int* v = cb.vertices.data();
        for (std::size_t c = 0; c < count; ++c, v += cb.stride) {
            double lo = values[v[0]];
            for (int i = 1; i < cb.stride; ++i)
                lo = std::min(lo, values[v[i]]);
            out[b][c] = lo;
        }
    }
}

long chi_from_minima(const GridDesign& design, const std::vector<std::vector<double>>& minima, double u)
{
    long chi = 0;
    for (std::size_t b = 0; b < minima.size(); ++b) {
        long count = 0;
        for (double v : minima[b])
            count += v >= u;
        chi += (design.cells[b].dim % 2 ? -count : count);
    }
    return chi;
}

}  // namespace

long empirical_euler_characteristic(const GridDesign& design, const Eigen::Ref<const Eigen::VectorXd>& values,
                                    double u)
{
    if (static_cast<std::size_t>(values.size()) != design.points.size())
        throw DomainError("field values do not match the design (" + std::to_string(values.size()) + " vs " +
                          std::to_string(design.points.size()) + ")");
    const Eigen::VectorXd v = values;
    std::vector<std::vector<double>> minima;
    cell_minima(design, v.data(), minima);
    return chi_from_minima(design, minima, u);
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double confidence)
{
    if (trials == 0 || successes > trials || !(confidence > 0.0 && confidence < 1.0))
        throw DomainError("wilson_interval: need 0 <= successes <= trials, trials > 0, confidence in (0, 1)");
    const double z = normal_quantile(0.5 + 0.5 * confidence);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

SimResult simulate_levels(const GridDesign& design, const FieldSampler& sampler, const std::vector<double>& levels,
                          const McSettings& mc)
{
    if (mc.n_samples < 2 || mc.block < 1)
        throw DomainError("Monte-Carlo run needs at least 2 samples and a positive block size");
    if (sampler.points() != design.points.size())
        throw DomainError("sampler and design disagree on the number of points");
    const std::size_t nl = levels.size();
    const std::size_t blocks = (static_cast<std::size_t>(mc.n_samples) + mc.block - 1) / static_cast<std::size_t>(mc.block);

    // Integer tallies per block: exceedances, sum chi, sum chi^2.
    struct Tally {
        std::vector<long long> hits, chi, chi2;
    };
    std::vector<Tally> tallies(blocks);
    parallel_for(blocks, [&](std::size_t b) {
        const int count = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(mc.block),
                                                                 static_cast<std::size_t>(mc.n_samples) - b * static_cast<std::size_t>(mc.block)));
        const Eigen::MatrixXd x = sampler.sample_block(mc.seed, b, count);
        Tally t{std::vector<long long>(nl, 0), std::vector<long long>(nl, 0), std::vector<long long>(nl, 0)};
        std::vector<std::vector<double>> minima;
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            const double* col = x.col(c).data();
            cell_minima(design, col, minima);
            const double top = x.col(c).maxCoeff();
            for (std::size_t l = 0; l < nl; ++l) {
                t.hits[l] += top >= levels[l];
                const long chi = chi_from_minima(design, minima, levels[l]);
                t.chi[l] += chi;
                t.chi2[l] += static_cast<long long>(chi) * chi;
            }
        }
        tallies[b] = std::move(t);
    });

    SimResult res;
    res.n_samples = static_cast<std::size_t>(mc.n_samples);
    res.seed = mc.seed;
    res.jitter = sampler.jitter();
    res.design_points = design.points.size();
    const double n = static_cast<double>(mc.n_samples);
    const double z = normal_quantile(0.995);
    for (std::size_t l = 0; l < nl; ++l) {
        long long hits = 0, chi = 0, chi2 = 0;
        for (const Tally& t : tallies) {
            hits += t.hits[l];
            chi += t.chi[l];
            chi2 += t.chi2[l];
        }
        LevelRecord r;
        r.u = levels[l];
        r.sup_prob = static_cast<double>(hits) / n;
        r.sup_ci = wilson_interval(static_cast<std::size_t>(hits), res.n_samples);
        r.mean_chi = static_cast<double>(chi) / n;
        const double var = std::max(0.0, (static_cast<double>(chi2) - n * r.mean_chi * r.mean_chi) / (n - 1.0));
        r.chi_std_error = std::sqrt(var / n);
        r.chi_ci = {r.mean_chi - z * r.chi_std_error, r.mean_chi + z * r.chi_std_error};
        res.levels.push_back(r);
    }
    return res;
}

SimResult run_mc_validation(const StationaryModel& model, const MeanFunction& mean, const Rectangle& t,
                            const std::vector<int>& counts, const std::vector<double>& levels, const McSettings& mc,
                            const QuadratureSpec& quad, BracketArgument arg)
{
    const GridDesign design = GridDesign::lattice(t, counts);
    const auto n = static_cast<Eigen::Index>(design.points.size());
    Eigen::MatrixXd c(n, n);
    Eigen::VectorXd m(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i) = mean.eval(design.points[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j <= i; ++j)
            c(i, j) = c(j, i) =
                model.covariance(design.points[static_cast<std::size_t>(i)] - design.points[static_cast<std::size_t>(j)]);
    }
    SimResult res = simulate_levels(design, FieldSampler(c, m), levels, mc);
    for (LevelRecord& r : res.levels)
        r.formula = expected_euler_rect(model, mean, t, r.u, quad, arg).total;
    return res;
}

SimResult run_mc_validation(const SchoenbergModel& model, const ChartMean& mean, int icosphere_level,
                            const std::vector<double>& levels, const McSettings& mc, const SphereQuadrature& quad,
                            BracketArgument arg, SphereDerivatives deriv)
{
    if (model.sphere_dim() != 2)
        throw DomainError("sphere Monte-Carlo is available on S^2 only");
    const GridDesign design = GridDesign::icosphere(icosphere_level);
    const auto n = static_cast<Eigen::Index>(design.points.size());
    Eigen::MatrixXd c(n, n);
    Eigen::VectorXd m(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd& p = design.points[static_cast<std::size_t>(i)];
        m(i) = mean.mean().eval(embedding_to_chart(p));
        for (Eigen::Index j = 0; j <= i; ++j)
            c(i, j) = c(j, i) = model.covariance(std::clamp(p.dot(design.points[static_cast<std::size_t>(j)]), -1.0, 1.0));
    }
    SimResult res = simulate_levels(design, FieldSampler(c, m), levels, mc);
    for (LevelRecord& r : res.levels)
        r.formula = expected_euler_sphere(model, mean, r.u, quad, arg, deriv).total;
    return res;
}

}  // namespace eec
