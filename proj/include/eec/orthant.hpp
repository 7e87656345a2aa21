#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace eec {

struct OrthantResult {
    double probability = 1.0;
    double error = 0.0;  // estimated absolute error; 0 for closed forms
};

// Phi_2(h, k; rho) = P{V1 <= h, V2 <= k} for standard normals with
// correlation rho (Sheppard's arcsine integral, composite Gauss-Legendre).
double bivariate_normal_cdf(double h, double k, double rho);

// P{Y_l >= 0 for all l} for Y ~ N(mean, cov).
//   dim 0: 1
//   dim 1: Psi(-mu / s)
//   dim 2: bivariate CDF
//   dim 3: one-dimensional quadrature of a conditional bivariate CDF
//   dim >= 4: Genz separation of variables on a shifted Kronecker lattice with
//             `qmc_points` points in total (>= 2^16); error from 8 shifts.
// A diagonal covariance short-circuits to the product of marginals.
OrthantResult positive_orthant_probability(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                           std::size_t qmc_points = std::size_t{1} << 16);

}  // namespace eec
