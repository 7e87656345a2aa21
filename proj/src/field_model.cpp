#include "eec/field_model.hpp"

#include "eec/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace eec {

namespace {

int kd(int a, int b) { return a == b ? 1 : 0; }

}  // namespace

// ---------------------------------------------------------------------------
// StationaryModel

StationaryModel StationaryModel::squared_exponential(int dim, double length_scale)
{
    if (dim < 1)
        throw ModelError("squared_exponential: dimension must be positive");
    if (!(length_scale > 0.0) || !std::isfinite(length_scale))
        throw ModelError("squared_exponential: length scale must be positive");
    StationaryModel m;
    m.dim_ = dim;
    m.family_ = NoiseFamily::SquaredExponential;
    m.length_scale_ = length_scale;
    m.lambda_ = Eigen::MatrixXd::Identity(dim, dim) / (length_scale * length_scale);
    m.validate();
    return m;
}

StationaryModel StationaryModel::cosine_mixture(std::vector<Eigen::VectorXd> frequencies, std::vector<double> weights)
{
    if (frequencies.empty() || frequencies.size() != weights.size())
        throw ModelError("cosine_mixture: need one positive weight per frequency");
    const auto dim = frequencies.front().size();
    if (dim < 1)
        throw ModelError("cosine_mixture: frequencies must be non-empty vectors");
    double total = 0.0;
    for (std::size_t r = 0; r < weights.size(); ++r) {
        if (frequencies[r].size() != dim)
            throw ModelError("cosine_mixture: frequency " + std::to_string(r) + " has the wrong dimension");
        if (!(weights[r] > 0.0))
            throw ModelError("cosine_mixture: weight " + std::to_string(r) + " is not positive");
        total += weights[r];
    }
    for (double& w : weights)
        w /= total;

    StationaryModel m;
    m.dim_ = static_cast<int>(dim);
    m.family_ = NoiseFamily::CosineMixture;
    m.frequencies_ = std::move(frequencies);
    m.weights_ = std::move(weights);
    m.lambda_ = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t r = 0; r < m.weights_.size(); ++r)
        m.lambda_ += m.weights_[r] * m.frequencies_[r] * m.frequencies_[r].transpose();
    m.validate();
    return m;
}

void StationaryModel::validate() const
{
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lambda_);
    const double top = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (!(eig.eigenvalues()(0) > 1e-12 * top))
        throw ModelError("stationary model: spectral moment matrix is not positive definite (degenerate "
                         "gradient law; a cosine mixture needs frequencies spanning R^N)");

    // Conditional Hessian law given Z(t), after normalizing the gradient with
    // Q = Lambda^{-1/2}: fourth'(i,j,k,l) - d_ij d_kl must be PSD over the
    // upper-triangular entries.
    const int n = dim_;
    const Eigen::MatrixXd q = principal_sqrt_inv(SymMatrix::from_dense(lambda_, 1e-10)).dense();
    Eigen::MatrixXd full(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    full(i * n + j, k * n + l) = fourth(i, j, k, l);
    Eigen::MatrixXd qq(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            qq.block(i * n, j * n, n, n) = q(i, j) * q;
    const Eigen::MatrixXd normalized = qq * full * qq.transpose();
    std::vector<int> upper;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            upper.push_back(i * n + j);
    const auto m = static_cast<Eigen::Index>(upper.size());
    Eigen::MatrixXd cond(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) {
            const int ea = upper[static_cast<std::size_t>(a)];
            const int eb = upper[static_cast<std::size_t>(b)];
            cond(a, b) = normalized(ea, eb) - kd(ea / n, ea % n) * kd(eb / n, eb % n);
        }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ceig(0.5 * (cond + cond.transpose()));
    const double cscale = std::max(1.0, ceig.eigenvalues().cwiseAbs().maxCoeff());
    if (ceig.eigenvalues()(0) < -1e-9 * cscale)
        throw ModelError("stationary model: conditional Hessian law is not positive semi-definite");
}

double StationaryModel::covariance(const Eigen::VectorXd& h) const
{
    if (h.size() != dim_)
        throw DomainError("covariance: lag has dimension " + std::to_string(h.size()) + ", model has " +
                          std::to_string(dim_));
    if (family_ == NoiseFamily::SquaredExponential)
        return std::exp(-0.5 * h.squaredNorm() / (length_scale_ * length_scale_));
    double c = 0.0;
    for (std::size_t r = 0; r < weights_.size(); ++r)
        c += weights_[r] * std::cos(frequencies_[r].dot(h));
    return c;
}

double StationaryModel::fourth(int i, int j, int k, int l) const
{
    if (family_ == NoiseFamily::SquaredExponential) {
        const double l4 = std::pow(length_scale_, 4);
        return (kd(i, j) * kd(k, l) + kd(i, k) * kd(j, l) + kd(i, l) * kd(j, k)) / l4;
    }
    double s = 0.0;
    for (std::size_t r = 0; r < weights_.size(); ++r) {
        const auto& w = frequencies_[r];
        s += weights_[r] * w(i) * w(j) * w(k) * w(l);
    }
    return s;
}

bool StationaryModel::is_isotropic(double tol) const
{
    const double g2 = lambda_(0, 0);
    const Eigen::MatrixXd diff = lambda_ - g2 * Eigen::MatrixXd::Identity(dim_, dim_);
    return diff.cwiseAbs().maxCoeff() <= tol * g2;
}

double StationaryModel::isotropic_gamma() const
{
    if (!is_isotropic(1e-12))
        throw DomainError("model is not isotropic (lambda != gamma^2 I)");
    return std::sqrt(lambda_(0, 0));
}

// ---------------------------------------------------------------------------
// MeanFunction

MeanFunction MeanFunction::constant(int dim, double c)
{
    if (dim < 1)
        throw ModelError("mean: dimension must be positive");
    MeanFunction m;
    m.dim_ = dim;
    m.family_ = MeanFamily::Constant;
    m.c_ = c;
    return m;
}

MeanFunction MeanFunction::linear(double c, Eigen::VectorXd gradient)
{
    if (gradient.size() < 1)
        throw ModelError("linear mean: empty gradient");
    MeanFunction m;
    m.dim_ = static_cast<int>(gradient.size());
    m.family_ = MeanFamily::Linear;
    m.c_ = c;
    m.g_ = std::move(gradient);
    return m;
}

MeanFunction MeanFunction::quadratic_bump(double c, Eigen::VectorXd center, Eigen::MatrixXd curvature)
{
    const auto n = center.size();
    if (n < 1 || curvature.rows() != n || curvature.cols() != n)
        throw ModelError("quadratic_bump: center and curvature dimensions disagree");
    const SymMatrix a = SymMatrix::from_dense(curvature, 1e-12);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.dense());
    if (!(eig.eigenvalues()(0) > 0.0))
        throw ModelError("quadratic_bump: curvature matrix must be positive definite");
    MeanFunction m;
    m.dim_ = static_cast<int>(n);
    m.family_ = MeanFamily::QuadraticBump;
    m.c_ = c;
    m.t0_ = std::move(center);
    m.a_ = a.dense();
    return m;
}

MeanFunction MeanFunction::cosine_product(int dim, double c, std::vector<double> amplitudes,
                                          std::vector<Eigen::VectorXd> frequencies)
{
    if (dim < 1)
        throw ModelError("cosine_product: dimension must be positive");
    if (amplitudes.size() != frequencies.size())
        throw ModelError("cosine_product: need one frequency vector per amplitude");
    for (const auto& f : frequencies)
        if (f.size() != dim)
            throw ModelError("cosine_product: frequency vector has the wrong dimension");
    MeanFunction m;
    m.dim_ = dim;
    m.family_ = MeanFamily::CosineProduct;
    m.c_ = c;
    m.amplitudes_ = std::move(amplitudes);
    m.frequencies_ = std::move(frequencies);
    return m;
}

bool MeanFunction::is_centered() const noexcept
{
    switch (family_) {
    case MeanFamily::Constant:
        return c_ == 0.0;
    case MeanFamily::Linear:
        return c_ == 0.0 && g_.isZero(0.0);
    case MeanFamily::CosineProduct:
        return c_ == 0.0 && std::all_of(amplitudes_.begin(), amplitudes_.end(), [](double a) { return a == 0.0; });
    case MeanFamily::QuadraticBump:
        return false;
    }
    return false;
}

double MeanFunction::eval(const Eigen::VectorXd& t) const
{
    switch (family_) {
    case MeanFamily::Constant:
        return c_;
    case MeanFamily::Linear:
        return c_ + g_.dot(t);
    case MeanFamily::QuadraticBump: {
        const Eigen::VectorXd d = t - t0_;
        return c_ - 0.5 * d.dot(a_ * d);
    }
    case MeanFamily::CosineProduct: {
        double v = c_;
        for (std::size_t r = 0; r < amplitudes_.size(); ++r) {
            double p = amplitudes_[r];
            for (int i = 0; i < dim_; ++i)
                p *= std::cos(frequencies_[r](i) * t(i));
            v += p;
        }
        return v;
    }
    }
    return 0.0;
}

Eigen::VectorXd MeanFunction::grad(const Eigen::VectorXd& t) const
{
    switch (family_) {
    case MeanFamily::Constant:
        return Eigen::VectorXd::Zero(dim_);
    case MeanFamily::Linear:
        return g_;
    case MeanFamily::QuadraticBump:
        return -a_ * (t - t0_);
    case MeanFamily::CosineProduct: {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
        for (std::size_t r = 0; r < amplitudes_.size(); ++r) {
            const Eigen::VectorXd& w = frequencies_[r];
            for (int k = 0; k < dim_; ++k) {
                double p = -amplitudes_[r] * w(k) * std::sin(w(k) * t(k));
                for (int i = 0; i < dim_; ++i)
                    if (i != k)
                        p *= std::cos(w(i) * t(i));
                g(k) += p;
            }
        }
        return g;
    }
    }
    return Eigen::VectorXd::Zero(dim_);
}

Eigen::MatrixXd MeanFunction::hess(const Eigen::VectorXd& t) const
{
    switch (family_) {
    case MeanFamily::Constant:
    case MeanFamily::Linear:
        return Eigen::MatrixXd::Zero(dim_, dim_);
    case MeanFamily::QuadraticBump:
        return -a_;
    case MeanFamily::CosineProduct: {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_, dim_);
        for (std::size_t r = 0; r < amplitudes_.size(); ++r) {
            const Eigen::VectorXd& w = frequencies_[r];
            for (int k = 0; k < dim_; ++k) {
                for (int l = k; l < dim_; ++l) {
                    double p = amplitudes_[r];
                    for (int i = 0; i < dim_; ++i) {
                        const double c = std::cos(w(i) * t(i));
                        const double s = std::sin(w(i) * t(i));
                        if (k == l && i == k)
                            p *= -w(i) * w(i) * c;
                        else if (i == k || i == l)
                            p *= -w(i) * s;
                        else
                            p *= c;
                    }
                    h(k, l) += p;
                    if (k != l)
                        h(l, k) += p;
                }
            }
        }
        return h;
    }
    }
    return Eigen::MatrixXd::Zero(dim_, dim_);
}

// ---------------------------------------------------------------------------
// Sphere covariances

double gegenbauer(int n, double lambda, double x)
{
    if (n < 0)
        throw DomainError("gegenbauer: negative degree");
    if (!(lambda > 0.0))
        throw DomainError("gegenbauer: order must be positive");
    if (n == 0)
        return 1.0;
    double prev = 1.0;
    double cur = 2.0 * lambda * x;
    for (int k = 2; k <= n; ++k) {
        const double next = (2.0 * x * (k + lambda - 1.0) * cur - (k + 2.0 * lambda - 2.0) * prev) / k;
        prev = cur;
        cur = next;
    }
    return cur;
}

double schoenberg_basis(int n, double order, double x)
{
    if (order > 0.0)
        return gegenbauer(n, order, x);
    if (n < 0)
        throw DomainError("schoenberg_basis: negative degree");
    if (n == 0)
        return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double schoenberg_basis_at_one(int n, double order)
{
    if (order == 0.0)
        return 1.0;
    double v = 1.0;
    for (int i = 1; i <= n; ++i)
        v *= (i + 2.0 * order - 1.0) / i;
    return v;
}

std::pair<double, double> schoenberg_c1_c2(std::span<const double> coeffs, double order)
{
    if (coeffs.empty())
        throw DomainError("schoenberg_c1_c2: empty coefficient list");
    if (order < 0.0)
        throw DomainError("schoenberg_c1_c2: negative order");
    double c1 = 0.0;
    double c2 = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const int n = static_cast<int>(i);
        const double a = coeffs[i];
        if (order == 0.0) {
            // T_n'(1) = n^2, T_n''(1) = n^2 (n^2 - 1) / 3
            const double n2 = static_cast<double>(n) * n;
            c1 += a * n2;
            c2 += a * n2 * (n2 - 1.0) / 3.0;
            continue;
        }
        if (n >= 1)
            c1 += a * 2.0 * order * schoenberg_basis_at_one(n - 1, order + 1.0);
        if (n >= 2)
            c2 += a * 4.0 * order * (order + 1.0) * schoenberg_basis_at_one(n - 2, order + 2.0);
    }
    return {c1, c2};
}

SchoenbergModel SchoenbergModel::from_coefficients(int sphere_dim, std::vector<double> coeffs)
{
    if (sphere_dim < 1)
        throw ModelError("schoenberg: sphere dimension must be positive");
    if (coeffs.empty())
        throw ModelError("schoenberg: empty coefficient list");
    if (coeffs.size() > static_cast<std::size_t>(max_degree) + 1)
        throw ModelError("schoenberg: series longer than degree 50");
    const double order = 0.5 * (sphere_dim - 1);
    double variance = 0.0;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        if (!(coeffs[n] >= 0.0) || !std::isfinite(coeffs[n]))
            throw ModelError("schoenberg: coefficient a_" + std::to_string(n) + " is negative or not finite");
        variance += coeffs[n] * schoenberg_basis_at_one(static_cast<int>(n), order);
    }
    if (!(variance > 0.0))
        throw ModelError("schoenberg: all coefficients are zero");
    for (double& a : coeffs)
        a /= variance;

    SchoenbergModel m;
    m.sphere_dim_ = sphere_dim;
    m.coeffs_ = std::move(coeffs);
    std::tie(m.c1_, m.c2_) = schoenberg_c1_c2(m.coeffs_, order);

    if (!(m.c1_ > 0.0))
        throw ModelError("schoenberg: C' must be positive (degenerate gradient law)");
    if (m.c2_ < -1e-12)
        throw ModelError("schoenberg: C'' is negative");
    // Conditional Hessian law C''(d_ij d_kl + d_ik d_jl + d_il d_jk) +
    // (C' - C'^2) d_ij d_kl over the upper-triangular entries has eigenvalues
    // 2C'' and 2C'' + N (C'' + C' - C'^2).
    const double n = sphere_dim;
    const double trace_mode = 2.0 * m.c2_ + n * (m.c2_ + m.c1_ - m.c1_ * m.c1_);
    if (trace_mode < -1e-10 * std::max(1.0, m.c1_ * m.c1_))
        throw ModelError("schoenberg: conditional Hessian law is not positive semi-definite "
                         "(2C'' + N(C'' + C' - C'^2) < 0)");
    return m;
}

SchoenbergModel SchoenbergModel::geometric(int sphere_dim, double ratio)
{
    if (!(ratio > 0.0 && ratio < 1.0))
        throw ModelError("schoenberg geometric: ratio must lie in (0, 1)");
    int m = 0;
    while (std::pow(ratio, m + 1) >= 1e-12) {
        ++m;
        if (m > max_degree)
            throw ModelError("schoenberg geometric: truncation needs degree above 50 for tail < 1e-12");
    }
    const double order = 0.5 * (sphere_dim - 1);
    std::vector<double> coeffs(static_cast<std::size_t>(m) + 1);
    for (int n = 0; n <= m; ++n)
        coeffs[static_cast<std::size_t>(n)] = std::pow(ratio, n) / schoenberg_basis_at_one(n, order);
    return from_coefficients(sphere_dim, std::move(coeffs));
}

double SchoenbergModel::covariance(double x) const
{
    const double order = this->order();
    double c = 0.0;
    for (std::size_t n = 0; n < coeffs_.size(); ++n)
        if (coeffs_[n] != 0.0)
            c += coeffs_[n] * schoenberg_basis(static_cast<int>(n), order, x);
    return c;
}

}  // namespace eec
