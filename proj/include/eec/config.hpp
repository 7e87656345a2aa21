#pragma once

// Run configuration: UTF-8 text of `key = value` lines with dotted keys.
// A `[section]` header prefixes the keys that follow with `section.`; `#`
// starts a comment. Vectors are comma separated; lists of vectors and matrix
// rows are separated by `;`.
//
//   domain = rectangle          domain = sphere
//   domain.lo = 0, 0            domain.dim = 2
//   domain.hi = 1, 1
//
//   noise.family = squared_exponential | cosine_mixture | schoenberg
//   noise.length_scale = 0.3                    (squared_exponential)
//   noise.frequencies = 1, 0; 0, 1              (cosine_mixture)
//   noise.weights = 0.5, 0.5                    (cosine_mixture)
//   noise.coeffs = 0.5, 0.3, 0.2                (schoenberg, or)
//   noise.ratio = 0.4                           (schoenberg, geometric)
//
//   mean.family = constant | linear | quadratic_bump | cosine_product
//   mean.c, mean.gradient, mean.center, mean.curvature, mean.amplitudes,
//   mean.frequencies
//
//   levels = 2.5, 3.0                           (non-decreasing)
//   quadrature.nodes_per_axis, quadrature.nodes_x, quadrature.orthant_points,
//   quadrature.colatitude_nodes, quadrature.longitude_nodes,
//   quadrature.longitude_offset
//   formula.bracket = residual | printed
//   formula.sphere_derivatives = frame | chart
//   mc.samples, mc.seed, mc.block, mc.grid (rectangle node counts),
//   mc.icosphere_level (sphere), mc.allowance
//   verify.matrix_samples
//   output.path, output.mc_csv

#include "eec/field_model.hpp"
#include "eec/rect_eec.hpp"
#include "eec/simlab.hpp"
#include "eec/sphere_eec.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eec {

enum class DomainKind { Rectangle, Sphere };

struct NoiseSpec {
    std::string family;
    double length_scale = 0.0;
    std::vector<std::vector<double>> frequencies;
    std::vector<double> weights;
    std::vector<double> coeffs;
    std::optional<double> ratio;

    bool operator==(const NoiseSpec&) const = default;
};

struct MeanSpec {
    std::string family = "constant";
    double c = 0.0;
    std::vector<double> gradient;
    std::vector<double> center;
    std::vector<std::vector<double>> curvature;
    std::vector<double> amplitudes;
    std::vector<std::vector<double>> frequencies;

    bool operator==(const MeanSpec&) const = default;
};

struct McSpec {
    int samples = 100000;
    std::uint64_t seed = 1;
    int block = 256;
    std::vector<int> grid;
    int icosphere_level = 3;
    double allowance = 0.2;  // discretization allowance, fraction of the formula

    bool operator==(const McSpec&) const = default;
};

struct RunConfig {
    DomainKind domain = DomainKind::Rectangle;
    std::vector<double> lo;
    std::vector<double> hi;
    int sphere_dim = 0;
    NoiseSpec noise;
    MeanSpec mean;
    std::vector<double> levels;
    QuadratureSpec quadrature;
    SphereQuadrature sphere_quadrature;
    BracketArgument bracket = BracketArgument::Residual;
    SphereDerivatives sphere_derivatives = SphereDerivatives::Frame;
    std::optional<McSpec> mc;
    std::size_t matrix_samples = 200000;
    std::string output_path;
    std::string mc_csv;

    bool operator==(const RunConfig& o) const;

    // Spatial dimension N of the domain.
    [[nodiscard]] int dim() const noexcept;
};

// Throws ConfigError naming the line and field of the first problem.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

// Model objects built from a parsed config. Construction failures surface as
// ConfigError on the offending section.
Rectangle build_rectangle(const RunConfig& config);
StationaryModel build_stationary(const RunConfig& config);
SchoenbergModel build_schoenberg(const RunConfig& config);
MeanFunction build_mean(const RunConfig& config);

}  // namespace eec
