#pragma once

// Monte-Carlo ground truth: exact-law sampling of the field at design points,
// Euler characteristics of vertex-spanned excursion subcomplexes, and
// validation runs that pair empirical estimates with the formula values.

#include "eec/field_model.hpp"
#include "eec/rect_eec.hpp"
#include "eec/sphere_eec.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace eec {

// Cells of one dimension, each listed by `stride` vertex indices.
struct CellBlock {
    int dim = 0;
    int stride = 1;
    std::vector<int> vertices;

    [[nodiscard]] std::size_t count() const noexcept { return vertices.size() / static_cast<std::size_t>(stride); }
};

// A finite cell complex over design points. Rectangle lattices carry the
// cubical complex; icospheres carry vertices, edges and triangles.
struct GridDesign {
    enum class Kind { Lattice, Icosphere };
    Kind kind = Kind::Lattice;
    std::vector<int> counts;              // lattice nodes per axis
    int level = 0;                        // icosphere subdivision level
    std::vector<Eigen::VectorXd> points;  // domain coordinates (embedding for spheres)
    std::vector<CellBlock> cells;         // one block per dimension, ascending

    // Lattice with counts[i] >= 2 nodes on axis i (axis 0 varies fastest).
    static GridDesign lattice(const Rectangle& t, std::vector<int> counts);
    // Icosahedron subdivided `level` times and projected onto S^2.
    static GridDesign icosphere(int level);

    // Alternating cell count of the whole complex.
    [[nodiscard]] long euler_characteristic() const;
};

constexpr std::size_t max_design_points = 4000;

// Exact joint law at fixed points via a dense Cholesky factor with diagonal
// jitter escalated from 1e-12 to 1e-8 (relative to the largest variance).
class FieldSampler {
public:
    FieldSampler(const Eigen::MatrixXd& covariance, Eigen::VectorXd mean);

    [[nodiscard]] std::size_t points() const noexcept { return static_cast<std::size_t>(mean_.size()); }
    [[nodiscard]] double jitter() const noexcept { return jitter_; }

    // `count` draws as columns; the normals come from one generator seeded
    // by derive_seed(seed, block), so blocks are independent of threading.
    [[nodiscard]] Eigen::MatrixXd sample_block(std::uint64_t seed, std::uint64_t block, int count) const;

private:
    Eigen::MatrixXd factor_;
    Eigen::VectorXd mean_;
    double jitter_ = 0.0;
};

using PointCovariance = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
using PointMean = std::function<double(const Eigen::VectorXd&)>;

// n_samples draws (columns) of the field at `points`; at most 4000 points.
Eigen::MatrixXd sample_gaussian_field(const std::vector<Eigen::VectorXd>& points, const PointCovariance& cov,
                                      const PointMean& mean, int n_samples, std::uint64_t seed);

// chi of the subcomplex of cells whose vertices all satisfy value >= u.
long empirical_euler_characteristic(const GridDesign& design, const Eigen::Ref<const Eigen::VectorXd>& values,
                                    double u);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for a binomial proportion at the given confidence.
Interval wilson_interval(std::size_t successes, std::size_t trials, double confidence = 0.99);

struct LevelRecord {
    double u = 0.0;
    double sup_prob = 0.0;
    Interval sup_ci;
    double mean_chi = 0.0;
    double chi_std_error = 0.0;
    Interval chi_ci;
    double formula = 0.0;
};

struct SimResult {
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    double jitter = 0.0;
    std::size_t design_points = 0;
    std::vector<LevelRecord> levels;
};

struct McSettings {
    int n_samples = 100000;
    std::uint64_t seed = 1;
    int block = 256;  // draws per generator stream
};

// Empirical part only: sup probability and mean chi per level at 99%.
SimResult simulate_levels(const GridDesign& design, const FieldSampler& sampler, const std::vector<double>& levels,
                          const McSettings& mc);

SimResult run_mc_validation(const StationaryModel& model, const MeanFunction& mean, const Rectangle& t,
                            const std::vector<int>& counts, const std::vector<double>& levels, const McSettings& mc,
                            const QuadratureSpec& quad = {}, BracketArgument arg = BracketArgument::Residual);
SimResult run_mc_validation(const SchoenbergModel& model, const ChartMean& mean, int icosphere_level,
                            const std::vector<double>& levels, const McSettings& mc,
                            const SphereQuadrature& quad = {}, BracketArgument arg = BracketArgument::Residual,
                            SphereDerivatives deriv = SphereDerivatives::Frame);

}  // namespace eec
