#pragma once

// Monte-Carlo estimates of E det(M + B - x I) for symmetric Gaussian matrices
// M whose entry law is given by a fourth-moment function. Independent of the
// closed forms in matrixcalc.hpp; used by tests and by `verify`.

#include "eec/matrixcalc.hpp"

#include <cstdint>
#include <functional>

namespace eec {

enum class MatrixKind {
    Delta,  // E{M_ij M_kl} = fourth(i,j,k,l) - d_ij d_kl
    Xi,     // E{M_ij M_kl} = fourth(i,j,k,l)
};

struct MatrixCovariance {
    int dim = 0;
    MatrixKind kind = MatrixKind::Delta;
    std::function<double(int, int, int, int)> fourth_moment;

    // fourth(i,j,k,l) = nu (d_ij d_kl + d_ik d_jl + d_il d_jk)
    static MatrixCovariance isotropic(int dim, MatrixKind kind, double nu);

    // Covariance over the dim(dim+1)/2 upper-triangular entries, ordered
    // (0,0), (0,1), ..., (0,n-1), (1,1), ...
    [[nodiscard]] Eigen::MatrixXd entry_covariance() const;

    // max deviation of fourth_moment over the 24 argument permutations.
    [[nodiscard]] double symmetry_defect() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

// Draws `samples` matrices (blocks of 4096 with seeds derived from `seed`,
// so the estimate is independent of the worker count). The entry covariance
// is factorized densely; diagonal jitter 1e-12 is added if a pivot underflows.
McEstimate mc_expected_det(const MatrixCovariance& law, const SymMatrix& b, double x, std::size_t samples,
                           std::uint64_t seed);

}  // namespace eec
