#pragma once

// Expected Euler characteristic of excursion sets of X = Z + m over a compact
// rectangle, for stationary unit-variance Z. The rectangle is decomposed
// into its 3^N open faces; every k-face J contributes
//
//   det(L_J)^{1/2} (2 pi)^{-(k+1)/2} int_J dt int_u^inf dx
//     exp{-[(x - m)^2 + grad_J m^T L_J^{-1} grad_J m] / 2}
//     * P{off-face derivatives in E(J) | grad_J X = 0} * P_J(x, t)
//
// with P_J the degree-k polynomial built from the principal minor sums of
// L_J^{-1/2} hess_J m L_J^{-1/2}. Vertices contribute orthant * Psi(u - m).
//
// Given X(t) = x the Hessian of Z has conditional mean -L_J (x - m(t)), so
// P_J is evaluated at x - m(t). Evaluating it at x instead reproduces the
// printed form of the theorem, which disagrees with simulation as soon as
// m(t) != 0; it is kept selectable for comparison.

#include "eec/field_model.hpp"
#include "eec/orthant.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace eec {

class Rectangle {
public:
    // Throws DomainError unless lo_i < hi_i for every axis.
    Rectangle(Eigen::VectorXd lo, Eigen::VectorXd hi);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(lo_.size()); }
    [[nodiscard]] const Eigen::VectorXd& lo() const noexcept { return lo_; }
    [[nodiscard]] const Eigen::VectorXd& hi() const noexcept { return hi_; }

    static Rectangle unit(int dim);

private:
    Eigen::VectorXd lo_;
    Eigen::VectorXd hi_;
};

// An open face: coordinates in `sigma` are free, every other coordinate j is
// pinned to lo_j (eps = 0) or hi_j (eps = 1). Indices are 0-based.
struct Face {
    int k = 0;
    std::vector<int> sigma;   // free coordinates, ascending
    std::vector<int> fixed;   // complement of sigma, ascending
    std::vector<int> eps;     // one bit per entry of `fixed`
    Eigen::VectorXd anchor;   // pinned coordinate values, aligned with `fixed`
    double volume = 1.0;      // k-dimensional Lebesgue measure

    // eps*_j = 2 eps_j - 1 for the i-th fixed coordinate.
    [[nodiscard]] int outward_sign(std::size_t i) const { return 2 * eps[i] - 1; }
    // Point of the face with the given free coordinates.
    [[nodiscard]] Eigen::VectorXd point(const Eigen::VectorXd& free_coords, int dim) const;
    // Text forms used in CSV output: 1-based sigma "1 3", eps bits "0 1".
    [[nodiscard]] std::string sigma_label() const;
    [[nodiscard]] std::string eps_label() const;
};

// All 3^N faces ordered by (k, sigma lexicographic, eps lexicographic).
std::vector<Face> enumerate_faces(const Rectangle& t);

// L_J: the k x k block of the spectral moment matrix over sigma(J).
SymMatrix face_lambda(const StationaryModel& model, const Face& face);

enum class BracketArgument {
    Residual,  // P_J(x - m(t)), the conditional-mean-consistent form
    Level,     // P_J(x), the printed form
};

struct QuadratureSpec {
    int nodes_per_axis = 24;
    int nodes_x = 48;
    std::size_t orthant_points = std::size_t{1} << 16;

    // Throws DomainError for non-positive node counts or fewer than 2^16
    // orthant points.
    void validate() const;
};

// Gaussian orthant probability of the off-face derivatives at t given
// grad_J X(t) = 0; for a vertex the unconditional P{grad X(t) in E}.
// Interior faces (k = N) return 1.
OrthantResult orthant_prob(const StationaryModel& model, const MeanFunction& mean, const Face& face,
                           const Eigen::VectorXd& t, std::size_t qmc_points = std::size_t{1} << 16);

// Coefficients c_0..c_k of the face polynomial, P_J(x) = sum_j c_j x^{k-j},
// for the normalized mean Hessian b = L_J^{-1/2} hess_J m L_J^{-1/2}.
std::vector<double> face_polynomial(const SymMatrix& b);

struct FaceContribution {
    Face face;
    double contribution = 0.0;
    double tail_bound = 0.0;     // bound on the discarded x > X_max mass
    double orthant_error = 0.0;  // accumulated QMC error estimate
    std::size_t nodes = 0;       // (t, x) nodes evaluated
};

struct EecReport {
    double u = 0.0;
    double total = 0.0;
    std::vector<FaceContribution> per_face;  // enumerate_faces order
    std::size_t quad_nodes_used = 0;
    double tail_bound = 0.0;
    double orthant_error = 0.0;
};

// Contribution of one face of `t` of dimension k >= 0 (vertices included so
// that a report can be assembled uniformly).
FaceContribution face_contribution(const StationaryModel& model, const MeanFunction& mean, const Rectangle& t,
                                   const Face& face, double u, const QuadratureSpec& quad = {},
                                   BracketArgument arg = BracketArgument::Residual);

// Full expected Euler characteristic. Faces are evaluated in parallel and
// summed in face order, so totals are reproducible for fixed node counts.
EecReport expected_euler_rect(const StationaryModel& model, const MeanFunction& mean, const Rectangle& t, double u,
                              const QuadratureSpec& quad = {}, BracketArgument arg = BracketArgument::Residual);

// Same quantity through the isotropic simplification (lambda = gamma^2 I):
// unconditional independent orthants and powers of gamma. DomainError for a
// non-isotropic model.
EecReport expected_euler_rect_isotropic(const StationaryModel& model, const MeanFunction& mean, const Rectangle& t,
                                        double u, const QuadratureSpec& quad = {},
                                        BracketArgument arg = BracketArgument::Residual);

struct InteriorMaximum {
    Eigen::VectorXd point;
    double value = 0.0;
    Eigen::MatrixXd hessian;
};

// Unique interior maximizer of the mean by multi-start ascent from the 3^N
// lattice starts. Throws DomainError("no interior maximum: ...") when the
// maximizer lies on the boundary, is not unique within 1e-8, or has a
// degenerate Hessian.
InteriorMaximum find_interior_maximum(const MeanFunction& mean, const Rectangle& t);

// Leading-order Laplace approximation
// sqrt(det L) u^{N/2} / sqrt(det(-hess m(t0))) * Psi(u - m(t0)).
double laplace_asymptotic(const StationaryModel& model, const MeanFunction& mean, const Rectangle& t, double u);

}  // namespace eec
