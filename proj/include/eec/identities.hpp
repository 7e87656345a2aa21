#pragma once

// Reference computations that reach the same numbers as the production code
// by unrelated routes. Used by `verify` and by the acceptance suite.

#include <Eigen/Dense>

#include <span>

namespace eec::oracle {

// int_u^inf H_n(x) e^{-x^2/2} dx by adaptive exp-sinh quadrature.
double hermite_tail_integral(int n, double u);

// n! sum_k H_{n-2k}(x) / (k! 2^k (n-2k)!), which equals x^n.
double hermite_expansion(int n, double x);

// E{Z_{i_1} ... Z_{i_n}} as (1 / (2^k k!)) sum over all n! orderings of the
// product of consecutive-pair covariances. n <= 10.
double wick_by_permutations(const Eigen::MatrixXd& cov, std::span<const int> indices);

// n-th Taylor coefficient of (1 - 2 r x + r^2)^{-lambda} by the Cauchy
// integral on |r| = 1/2 (trapezoid rule, 256 nodes), lambda > 0.
double gegenbauer_by_contour(int n, double lambda, double x);

// int over the chart of S^N of prod (sin th_i)^{N-i} by tensor
// Gauss-Legendre in the colatitudes (the longitude contributes 2 pi).
double sphere_measure(int n, int nodes = 48);

}  // namespace eec::oracle
