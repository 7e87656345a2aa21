#pragma once

// Expected Euler characteristic of excursion sets of X = Z + m over S^N for
// isotropic unit-variance Z, in spherical coordinates
//   t_1 = cos th_1, ..., t_{N+1} = sin th_1 ... sin th_{N-1} sin th_N,
// th in [0, pi]^{N-1} x [0, 2 pi). The mean is given directly on the chart.
//
// The chart metric is diag(h_i^2), not the identity, so the gradient and
// Hessian of the mean enter through the orthonormal frame (covariant
// Hessian), and, as on rectangles, the bracket polynomial is evaluated at
// x - m(th). SphereDerivatives::Chart with BracketArgument::Level is the
// printed chart form; both differ from simulation once m is not constant.

#include "eec/field_model.hpp"
#include "eec/rect_eec.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace eec {

// Spherical-coordinate conversions; embedding has N + 1 entries.
Eigen::VectorXd chart_to_embedding(const Eigen::VectorXd& theta);
// Inverse on the open chart; longitudes land in [0, 2 pi). Throws
// DomainError if |t| differs from 1 by more than 1e-9.
Eigen::VectorXd embedding_to_chart(const Eigen::VectorXd& t);

// phi(th) = prod_{i=1}^{N-1} (sin th_i)^{N-i}.
double chart_jacobian(const Eigen::VectorXd& theta);

struct MeanDerivatives {
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};

// Gradient and covariant Hessian of a chart function expressed in the
// orthonormal frame e_i = h_i^{-1} d/dth_i, h_i = prod_{k<i} sin th_k. At
// the equator of every coordinate circle these equal the chart derivatives.
MeanDerivatives frame_derivatives(const MeanFunction& mean, const Eigen::VectorXd& theta);

// Which derivatives of the mean enter the sphere formula. Frame uses the
// intrinsic quantities above; Chart uses raw partial derivatives in theta,
// the literal reading of the chart formula, which is coordinate dependent.
enum class SphereDerivatives { Frame, Chart };

// A MeanFunction interpreted on the chart of S^N. Construction checks that
// the mean is 2 pi periodic in the longitude and single valued at the
// poles, with bounded gradient and Hessian there, on a boundary mesh.
class ChartMean {
public:
    explicit ChartMean(MeanFunction mean);

    [[nodiscard]] int sphere_dim() const noexcept { return mean_.dim(); }
    [[nodiscard]] const MeanFunction& mean() const noexcept { return mean_; }
    [[nodiscard]] bool periodic() const noexcept { return periodic_; }
    [[nodiscard]] bool pole_regular() const noexcept { return pole_regular_; }

private:
    MeanFunction mean_;
    bool periodic_ = false;
    bool pole_regular_ = false;
};

struct SphereQuadrature {
    int colatitude_nodes = 48;
    int longitude_nodes = 64;
    int nodes_x = 48;
    double longitude_offset = 0.0;  // origin of the periodic rule

    void validate() const;
};

struct SphereReport {
    double u = 0.0;
    double total = 0.0;
    double closed_form = 0.0;  // NaN unless the mean is identically zero
    double c1 = 0.0;
    double c2 = 0.0;
    std::size_t quad_nodes_used = 0;
    double tail_bound = 0.0;
};

// Bracket coefficients c_0..c_N (P(x) = sum_j c_j x^{N-j}) with factors
// C'^{N/2-j+i} (C'-1)^i S_{j-2i}(hess); C' within 1e-12 of 1 drops every
// i >= 1 term exactly.
std::vector<double> sphere_polynomial(const SymMatrix& hess, double c1);

// Throws DomainError for N outside 1..4, a mean of a different dimension,
// or a mean that is not periodic and pole regular.
SphereReport expected_euler_sphere(const SchoenbergModel& model, const ChartMean& mean, double u,
                                   const SphereQuadrature& quad = {},
                                   BracketArgument arg = BracketArgument::Residual,
                                   SphereDerivatives deriv = SphereDerivatives::Frame);

// omega_j = 2 pi^{(j+1)/2} / Gamma((j+1)/2), area of the unit S^j.
double sphere_area(int j);
// L_j(S^N) = 2 binom(N, j) omega_N / omega_{N-j} for N - j even, else 0.
double lk_curvature(int j, int n);
// rho_0 = Psi(u), rho_j = (2 pi)^{-(j+1)/2} H_{j-1}(u) e^{-u^2/2}.
double rho(int j, double u);
// sum_j C'^{j/2} L_j(S^N) rho_j(u).
double centered_sphere_closed_form(const SchoenbergModel& model, double u);

}  // namespace eec
