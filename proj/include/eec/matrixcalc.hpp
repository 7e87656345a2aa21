#pragma once

// Special functions and exact expectations of determinants of shifted
// symmetric Gaussian matrices.
//
// Hermite polynomials use the probabilists' convention throughout:
// H_0 = 1, H_1 = x, H_{n+1} = x H_n - n H_{n-1}. With this convention
// E det(Delta_N - x I) = (-1)^N H_N(x). The physicists' H_n would silently
// corrupt every Euler characteristic density downstream.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace eec {

// Real symmetric matrix. Construction validates symmetry and stores the
// exactly symmetrized entries.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(Eigen::Index n) : m_(Eigen::MatrixXd::Zero(n, n)) {}

    static SymMatrix identity(Eigen::Index n);
    static SymMatrix diagonal(const Eigen::VectorXd& d);
    // Throws DomainError if |m_ij - m_ji| exceeds tol * max(1, |m|_max).
    static SymMatrix from_dense(const Eigen::MatrixXd& m, double tol = 1e-12);

    [[nodiscard]] Eigen::Index dim() const noexcept { return m_.rows(); }
    [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
    void set(Eigen::Index i, Eigen::Index j, double v)
    {
        m_(i, j) = v;
        m_(j, i) = v;
    }
    [[nodiscard]] const Eigen::MatrixXd& dense() const noexcept { return m_; }

    SymMatrix& operator*=(double s)
    {
        m_ *= s;
        return *this;
    }

private:
    Eigen::MatrixXd m_;
};

// n! as an exact integer; n <= 20.
std::uint64_t factorial(int n);

// Probabilists' Hermite polynomial. n = -1 gives sqrt(2 pi) Psi(x) exp(x^2/2).
// Throws DomainError for n < -1.
double hermite(int n, double x);

// Standard normal upper tail Psi(x) = P{N(0,1) >= x}.
double gaussian_tail(double x);
// Standard normal density.
double normal_pdf(double x);
// Standard normal CDF Phi(x) = Psi(-x).
inline double normal_cdf(double x) { return gaussian_tail(-x); }
// Phi^{-1}(p), p in (0, 1).
double normal_quantile(double p);

// Sum of the binom(N, j) principal minors of order j; S_0 = 1.
double minor_sum(const SymMatrix& b, int j);
// S_0 .. S_N in one pass over the subsets.
std::vector<double> minor_sums(const SymMatrix& b);

// E det(Delta + B - x I) where E{Delta_ij Delta_kl} = E(i,j,k,l) - d_ij d_kl
// with E fully symmetric. The symmetric part cancels, so no fourth-moment
// function enters.
double expected_det_delta(const SymMatrix& b, double x);

// E det(Xi + B - x I) for a centered Xi with fully symmetric entry covariance;
// equals det(B - x I).
double expected_det_xi(const SymMatrix& b, double x);

// Mixed moment E{Z_{i1} ... Z_{in}} of a centered Gaussian vector with the
// given covariance. Indices are 0-based. Throws DomainError on a bad index.
double wick_moment(const Eigen::MatrixXd& cov, std::span<const int> indices);

struct SymmetricEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns
};

// Cyclic Jacobi eigendecomposition; off-diagonal tolerance 1e-13 |B|_F,
// at most 100 sweeps.
SymmetricEigen jacobi_eigen(const SymMatrix& b);

// Principal square root of B^{-1}: the unique PD Q with Q B Q = I.
// Throws SingularityError if the smallest eigenvalue is <= 1e-12 |B|.
SymMatrix principal_sqrt_inv(const SymMatrix& b);

}  // namespace eec
