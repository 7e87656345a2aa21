#pragma once

// Model families for the stationary noise, the mean function and isotropic
// covariances on the sphere. Every model is immutable after construction and
// exposes exactly the moments the Euler characteristic formulas consume.

#include "eec/matrixcalc.hpp"

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

namespace eec {

enum class NoiseFamily { SquaredExponential, CosineMixture };

// Centered, unit-variance stationary Gaussian field on R^N.
//   SquaredExponential: C(h) = exp(-|h|^2 / (2 l^2))
//   CosineMixture:      C(h) = sum_r w_r cos(<omega_r, h>), weights normalized
// Construction rejects models whose spectral moment matrix is not PD or whose
// conditional Hessian law is not PSD.
class StationaryModel {
public:
    static StationaryModel squared_exponential(int dim, double length_scale);
    static StationaryModel cosine_mixture(std::vector<Eigen::VectorXd> frequencies, std::vector<double> weights);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] NoiseFamily family() const noexcept { return family_; }
    [[nodiscard]] double length_scale() const noexcept { return length_scale_; }
    [[nodiscard]] const std::vector<Eigen::VectorXd>& frequencies() const noexcept { return frequencies_; }
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }

    [[nodiscard]] double covariance(const Eigen::VectorXd& h) const;
    // Second spectral moments lambda_ij = Cov(Z_i, Z_j).
    [[nodiscard]] const Eigen::MatrixXd& lambda() const noexcept { return lambda_; }
    // Fourth spectral moments E{Z_ij Z_kl}.
    [[nodiscard]] double fourth(int i, int j, int k, int l) const;

    // True when lambda = gamma^2 I to relative tolerance tol.
    [[nodiscard]] bool is_isotropic(double tol = 1e-14) const;
    // gamma with lambda = gamma^2 I; DomainError if not isotropic.
    [[nodiscard]] double isotropic_gamma() const;

private:
    StationaryModel() = default;
    void validate() const;

    int dim_ = 0;
    NoiseFamily family_ = NoiseFamily::SquaredExponential;
    double length_scale_ = 1.0;
    std::vector<Eigen::VectorXd> frequencies_;
    std::vector<double> weights_;
    Eigen::MatrixXd lambda_;
};

enum class MeanFamily { Constant, Linear, QuadraticBump, CosineProduct };

// Deterministic mean with analytic gradient and Hessian.
//   Constant:      m(t) = c
//   Linear:        m(t) = c + <g, t>
//   QuadraticBump: m(t) = c - (t - t0)^T A (t - t0) / 2, A symmetric PD
//   CosineProduct: m(t) = c + sum_r a_r prod_i cos(omega_{r,i} t_i)
class MeanFunction {
public:
    static MeanFunction constant(int dim, double c);
    static MeanFunction linear(double c, Eigen::VectorXd gradient);
    static MeanFunction quadratic_bump(double c, Eigen::VectorXd center, Eigen::MatrixXd curvature);
    static MeanFunction cosine_product(int dim, double c, std::vector<double> amplitudes,
                                       std::vector<Eigen::VectorXd> frequencies);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] MeanFamily family() const noexcept { return family_; }
    [[nodiscard]] double offset() const noexcept { return c_; }
    [[nodiscard]] const Eigen::VectorXd& gradient_vector() const noexcept { return g_; }
    [[nodiscard]] const Eigen::VectorXd& center() const noexcept { return t0_; }
    [[nodiscard]] const Eigen::MatrixXd& curvature() const noexcept { return a_; }
    [[nodiscard]] const std::vector<double>& amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] const std::vector<Eigen::VectorXd>& frequencies() const noexcept { return frequencies_; }

    // True when the mean is identically zero.
    [[nodiscard]] bool is_centered() const noexcept;

    [[nodiscard]] double eval(const Eigen::VectorXd& t) const;
    [[nodiscard]] Eigen::VectorXd grad(const Eigen::VectorXd& t) const;
    [[nodiscard]] Eigen::MatrixXd hess(const Eigen::VectorXd& t) const;

private:
    MeanFunction() = default;

    int dim_ = 0;
    MeanFamily family_ = MeanFamily::Constant;
    double c_ = 0.0;
    Eigen::VectorXd g_;
    Eigen::VectorXd t0_;
    Eigen::MatrixXd a_;
    std::vector<double> amplitudes_;
    std::vector<Eigen::VectorXd> frequencies_;
};

// Ultraspherical polynomial P_n^lambda(x) by the three-term recurrence;
// lambda > 0.
double gegenbauer(int n, double lambda, double x);

// Basis of the Schoenberg expansion on S^N with order lambda = (N-1)/2.
// For lambda > 0 this is P_n^lambda; on the circle (lambda = 0) the
// ultraspherical family degenerates and the Chebyshev polynomial T_n, its
// normalized limit, is used instead.
double schoenberg_basis(int n, double order, double x);
// schoenberg_basis(n, order, 1): binom(n + 2 lambda - 1, n), or 1 on the circle.
double schoenberg_basis_at_one(int n, double order);

// (C', C'') = (sum a_n P_n'(1), sum a_n P_n''(1)) using
// dP_n^l/dx = 2 l P_{n-1}^{l+1}. Throws DomainError on an empty list.
std::pair<double, double> schoenberg_c1_c2(std::span<const double> coeffs, double order);

// Isotropic unit-variance covariance on S^N:
// C(<t,s>) = sum_n a_n P_n^lambda(<t,s>).
class SchoenbergModel {
public:
    static constexpr int max_degree = 50;

    // Raw nonnegative coefficients a_0..a_M (M <= 50), rescaled so that
    // sum a_n P_n(1) = 1.
    static SchoenbergModel from_coefficients(int sphere_dim, std::vector<double> coeffs);
    // Variance fractions a_n P_n(1) proportional to ratio^n, truncated at the
    // first M with tail ratio^{M+1} < 1e-12; rejected if M > 50.
    static SchoenbergModel geometric(int sphere_dim, double ratio);

    [[nodiscard]] int sphere_dim() const noexcept { return sphere_dim_; }
    [[nodiscard]] double order() const noexcept { return 0.5 * (sphere_dim_ - 1); }
    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] double c1() const noexcept { return c1_; }
    [[nodiscard]] double c2() const noexcept { return c2_; }

    // C as a function of the inner product x = <t, s> in [-1, 1].
    [[nodiscard]] double covariance(double x) const;

private:
    SchoenbergModel() = default;

    int sphere_dim_ = 0;
    std::vector<double> coeffs_;
    double c1_ = 0.0;
    double c2_ = 0.0;
};

}  // namespace eec
