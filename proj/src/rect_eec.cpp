#include "eec/rect_eec.hpp"

#include "eec/errors.hpp"
#include "eec/matrixcalc.hpp"
#include "eec/parallel.hpp"
#include "eec/quadrature.hpp"
#include "x_integral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace eec {

Rectangle::Rectangle(Eigen::VectorXd lo, Eigen::VectorXd hi) : lo_(std::move(lo)), hi_(std::move(hi))
{
    if (lo_.size() == 0 || lo_.size() != hi_.size())
        throw DomainError("rectangle: lo and hi must be non-empty and of equal length");
    for (Eigen::Index i = 0; i < lo_.size(); ++i)
        if (!(lo_(i) < hi_(i)) || !std::isfinite(lo_(i)) || !std::isfinite(hi_(i)))
            throw DomainError("rectangle: lo_" + std::to_string(i + 1) + " must be below hi_" + std::to_string(i + 1));
}

Rectangle Rectangle::unit(int dim)
{
    return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
}

Eigen::VectorXd Face::point(const Eigen::VectorXd& free_coords, int dim) const
{
    Eigen::VectorXd t(dim);
    for (std::size_t i = 0; i < sigma.size(); ++i)
        t(sigma[i]) = free_coords(static_cast<Eigen::Index>(i));
    for (std::size_t i = 0; i < fixed.size(); ++i)
        t(fixed[i]) = anchor(static_cast<Eigen::Index>(i));
    return t;
}

namespace {

std::string join(const std::vector<int>& v, int offset)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ' ';
        out += std::to_string(v[i] + offset);
    }
    return out;
}

}  // namespace

std::string Face::sigma_label() const { return join(sigma, 1); }
std::string Face::eps_label() const { return join(eps, 0); }

std::vector<Face> enumerate_faces(const Rectangle& t)
{
    const int n = t.dim();
    std::vector<Face> faces;
    for (int k = 0; k <= n; ++k) {
        // Combinations of size k in lexicographic order.
        std::vector<int> comb(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
            comb[static_cast<std::size_t>(i)] = i;
        while (true) {
            std::vector<int> fixed;
            for (int j = 0, c = 0; j < n; ++j) {
                if (c < k && comb[static_cast<std::size_t>(c)] == j)
                    ++c;
                else
                    fixed.push_back(j);
            }
            const int m = n - k;
            double volume = 1.0;
            for (int j : comb)
                volume *= t.hi()(j) - t.lo()(j);
            // eps patterns lexicographic, first fixed coordinate most significant.
            for (unsigned bits = 0; bits < (1u << m); ++bits) {
                Face f;
                f.k = k;
                f.sigma = comb;
                f.fixed = fixed;
                f.eps.resize(static_cast<std::size_t>(m));
                f.anchor.resize(m);
                for (int i = 0; i < m; ++i) {
                    const int e = static_cast<int>((bits >> (m - 1 - i)) & 1u);
                    f.eps[static_cast<std::size_t>(i)] = e;
                    const int j = fixed[static_cast<std::size_t>(i)];
                    f.anchor(i) = e ? t.hi()(j) : t.lo()(j);
                }
                f.volume = volume;
                faces.push_back(std::move(f));
            }
            int i = k - 1;
            while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i)
                --i;
            if (i < 0)
                break;
            ++comb[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return faces;
}

SymMatrix face_lambda(const StationaryModel& model, const Face& face)
{
    const auto k = static_cast<Eigen::Index>(face.sigma.size());
    SymMatrix out(k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i; j < k; ++j)
            out.set(i, j, model.lambda()(face.sigma[static_cast<std::size_t>(i)], face.sigma[static_cast<std::size_t>(j)]));
    return out;
}

void QuadratureSpec::validate() const
{
    if (nodes_per_axis < 1 || nodes_x < 1)
        throw DomainError("quadrature: node counts must be positive");
    if (orthant_points < (std::size_t{1} << 16))
        throw DomainError("quadrature: orthant_points must be at least 65536");
}

using detail::integrate_x;
using detail::NodeIntegrand;
using detail::XIntegral;

namespace {

void check_dims(const StationaryModel& model, const MeanFunction& mean, int dim)
{
    if (model.dim() != dim || mean.dim() != dim)
        throw DomainError("dimension mismatch: model " + std::to_string(model.dim()) + ", mean " +
                          std::to_string(mean.dim()) + ", domain " + std::to_string(dim));
}

// Off-face derivative law given grad_J X = 0, sign-flipped so that the event
// is the positive orthant: mean D (g_off - R g_J), covariance D S D.
class ConditionalOrthant {
public:
    ConditionalOrthant(const StationaryModel& model, const Face& face, std::size_t points) : face_(face), points_(points)
    {
        const auto k = static_cast<Eigen::Index>(face.sigma.size());
        const auto m = static_cast<Eigen::Index>(face.fixed.size());
        const Eigen::MatrixXd& lam = model.lambda();
        Eigen::MatrixXd loo(m, m), loj(m, k), ljj(k, k);
        for (Eigen::Index a = 0; a < m; ++a) {
            for (Eigen::Index b = 0; b < m; ++b)
                loo(a, b) = lam(face.fixed[static_cast<std::size_t>(a)], face.fixed[static_cast<std::size_t>(b)]);
            for (Eigen::Index b = 0; b < k; ++b)
                loj(a, b) = lam(face.fixed[static_cast<std::size_t>(a)], face.sigma[static_cast<std::size_t>(b)]);
        }
        for (Eigen::Index a = 0; a < k; ++a)
            for (Eigen::Index b = 0; b < k; ++b)
                ljj(a, b) = lam(face.sigma[static_cast<std::size_t>(a)], face.sigma[static_cast<std::size_t>(b)]);
        if (k > 0) {
            Eigen::LLT<Eigen::MatrixXd> llt(ljj);
            if (llt.info() != Eigen::Success)
                throw ModelError("spectral moment block of face is not positive definite");
            regression_ = llt.solve(loj.transpose()).transpose();
            cov_ = loo - regression_ * loj.transpose();
        } else {
            regression_ = Eigen::MatrixXd::Zero(m, 0);
            cov_ = loo;
        }
        cov_ = 0.5 * (cov_ + cov_.transpose());
        if (m > 0) {
            Eigen::LLT<Eigen::MatrixXd> check(cov_);
            const double scale = cov_.diagonal().cwiseAbs().maxCoeff();
            if (check.info() != Eigen::Success || cov_.diagonal().minCoeff() <= 1e-14 * std::max(scale, 1e-300))
                throw ModelError("conditional covariance of off-face derivatives is not positive definite");
        }
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b)
                cov_(a, b) *= face.outward_sign(static_cast<std::size_t>(a)) * face.outward_sign(static_cast<std::size_t>(b));
    }

    [[nodiscard]] OrthantResult at(const Eigen::VectorXd& grad) const
    {
        const auto m = static_cast<Eigen::Index>(face_.fixed.size());
        if (m == 0)
            return {1.0, 0.0};
        Eigen::VectorXd gj(static_cast<Eigen::Index>(face_.sigma.size()));
        for (std::size_t i = 0; i < face_.sigma.size(); ++i)
            gj(static_cast<Eigen::Index>(i)) = grad(face_.sigma[i]);
        Eigen::VectorXd mu(m);
        for (Eigen::Index a = 0; a < m; ++a)
            mu(a) = grad(face_.fixed[static_cast<std::size_t>(a)]);
        if (gj.size() > 0)
            mu -= regression_ * gj;
        for (Eigen::Index a = 0; a < m; ++a)
            mu(a) *= face_.outward_sign(static_cast<std::size_t>(a));
        return positive_orthant_probability(mu, cov_, points_);
    }

private:
    const Face& face_;
    std::size_t points_;
    Eigen::MatrixXd regression_;
    Eigen::MatrixXd cov_;
};

// Tensor Gauss-Legendre nodes over the free coordinates of a face.
struct FaceGrid {
    std::vector<Eigen::VectorXd> points;  // full N-dimensional points
    std::vector<double> weights;
};

FaceGrid face_grid(const Face& face, const Rectangle& box, int nodes)
{
    const int n = box.dim();
    std::vector<QuadRule> rules;
    for (int j : face.sigma)
        rules.push_back(gauss_legendre(nodes, box.lo()(j), box.hi()(j)));
    std::size_t total = 1;
    for (std::size_t i = 0; i < rules.size(); ++i)
        total *= static_cast<std::size_t>(nodes);
    FaceGrid grid;
    grid.points.reserve(total);
    grid.weights.reserve(total);
    std::vector<int> idx(face.sigma.size(), 0);
    Eigen::VectorXd free(static_cast<Eigen::Index>(face.sigma.size()));
    for (std::size_t p = 0; p < total; ++p) {
        double w = 1.0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            free(static_cast<Eigen::Index>(i)) = rules[i].nodes[static_cast<std::size_t>(idx[i])];
            w *= rules[i].weights[static_cast<std::size_t>(idx[i])];
        }
        grid.points.push_back(face.point(free, n));
        grid.weights.push_back(w);
        for (std::size_t i = idx.size(); i-- > 0;) {
            if (++idx[i] < nodes)
                break;
            idx[i] = 0;
        }
    }
    return grid;
}

Eigen::VectorXd restrict(const Eigen::VectorXd& v, const std::vector<int>& idx)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = v(idx[i]);
    return out;
}

Eigen::MatrixXd restrict(const Eigen::MatrixXd& a, const std::vector<int>& idx)
{
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd out(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            out(i, j) = a(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    return out;
}

// Evaluates one face over a prepared grid with a per-node integrand builder.
template <class Builder>
FaceContribution integrate_face(const Face& face, const FaceGrid& grid, double u, const QuadratureSpec& quad,
                                double prefactor, Builder&& build)
{
    const QuadRule ref = gauss_legendre(quad.nodes_x);
    FaceContribution fc;
    fc.face = face;
    double total = 0.0;
    double tail = 0.0;
    double orth_err = 0.0;
    for (std::size_t p = 0; p < grid.points.size(); ++p) {
        double err = 0.0;
        NodeIntegrand in = build(grid.points[p], err);
        in.scale *= grid.weights[p];
        const XIntegral xi = integrate_x(in, u, ref);
        total += xi.value;
        tail += xi.tail;
        orth_err += grid.weights[p] * err;
    }
    fc.contribution = prefactor * total;
    fc.tail_bound = prefactor * tail;
    fc.orthant_error = prefactor * orth_err;
    fc.nodes = grid.points.size() * ref.size();
    return fc;
}

double two_pi_power(int k) { return std::pow(2.0 * std::numbers::pi, -0.5 * (k + 1)); }

}  // namespace

OrthantResult orthant_prob(const StationaryModel& model, const MeanFunction& mean, const Face& face,
                           const Eigen::VectorXd& t, std::size_t qmc_points)
{
    check_dims(model, mean, static_cast<int>(t.size()));
    if (face.fixed.empty())
        return {1.0, 0.0};
    const ConditionalOrthant co(model, face, qmc_points);
    return co.at(mean.grad(t));
}

std::vector<double> face_polynomial(const SymMatrix& b)
{
    const int k = static_cast<int>(b.dim());
    const std::vector<double> s = minor_sums(b);
    std::vector<double> c(static_cast<std::size_t>(k + 1), 0.0);
    for (int j = 0; j <= k; ++j) {
        double inner = 0.0;
        for (int i = 0; 2 * i <= j; ++i) {
            const double term = static_cast<double>(factorial(k - j + 2 * i)) /
                                (static_cast<double>(factorial(i)) * std::ldexp(1.0, i)) *
                                s[static_cast<std::size_t>(j - 2 * i)];
            inner += (i % 2 ? -term : term);
        }
        const double sign = (j % 2) ? -1.0 : 1.0;
        c[static_cast<std::size_t>(j)] = sign * inner / static_cast<double>(factorial(k - j));
    }
    return c;
}

namespace {

FaceContribution general_face(const StationaryModel& model, const MeanFunction& mean, const Face& face,
                              const Rectangle& box, double u, const QuadratureSpec& quad, BracketArgument arg)
{
    const ConditionalOrthant co(model, face, quad.orthant_points);
    if (face.k == 0) {
        const Eigen::VectorXd t = face.point(Eigen::VectorXd(0), box.dim());
        const OrthantResult o = co.at(mean.grad(t));
        FaceContribution fc;
        fc.face = face;
        fc.contribution = o.probability * gaussian_tail(u - mean.eval(t));
        fc.orthant_error = o.error;
        fc.nodes = 1;
        return fc;
    }
    const SymMatrix lam_j = face_lambda(model, face);
    const SymMatrix q = principal_sqrt_inv(lam_j);
    const Eigen::MatrixXd lam_inv = q.dense() * q.dense();
    const double prefactor = std::sqrt(lam_j.dense().determinant()) * two_pi_power(face.k);
    const FaceGrid grid = face_grid(face, box, quad.nodes_per_axis);
    return integrate_face(face, grid, u, quad, prefactor, [&](const Eigen::VectorXd& t, double& err) {
        const Eigen::VectorXd g = mean.grad(t);
        const Eigen::VectorXd gj = restrict(g, face.sigma);
        const Eigen::MatrixXd hj = restrict(mean.hess(t), face.sigma);
        const OrthantResult o = co.at(g);
        err = o.error;
        NodeIntegrand in;
        in.m = mean.eval(t);
        in.shift = arg == BracketArgument::Residual ? in.m : 0.0;
        in.scale = std::exp(-0.5 * gj.dot(lam_inv * gj)) * o.probability;
        in.coeffs = face_polynomial(SymMatrix::from_dense(q.dense() * hj * q.dense(), 1e-9));
        return in;
    });
}

// Coefficients of the isotropic bracket: gamma^{-2(j-2i)} S_{j-2i}(hess m_J).
std::vector<double> isotropic_polynomial(const Eigen::MatrixXd& h, double gamma)
{
    const int k = static_cast<int>(h.rows());
    std::vector<double> s(static_cast<std::size_t>(k + 1), 0.0);
    // Principal minor sums of h by direct subset enumeration.
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i))
                idx.push_back(i);
        const double det = idx.empty() ? 1.0 : restrict(h, idx).determinant();
        s[idx.size()] += det;
    }
    const double g2 = 1.0 / (gamma * gamma);
    std::vector<double> c(static_cast<std::size_t>(k + 1), 0.0);
    for (int j = 0; j <= k; ++j) {
        double inner = 0.0;
        for (int i = 0; 2 * i <= j; ++i) {
            const int r = j - 2 * i;
            double num = 1.0;
            for (int f = 2; f <= k - j + 2 * i; ++f)
                num *= f;
            double den = std::ldexp(1.0, i);
            for (int f = 2; f <= i; ++f)
                den *= f;
            const double term = num / den * std::pow(g2, r) * s[static_cast<std::size_t>(r)];
            inner += (i % 2 ? -term : term);
        }
        double fact = 1.0;
        for (int f = 2; f <= k - j; ++f)
            fact *= f;
        c[static_cast<std::size_t>(j)] = ((j % 2) ? -inner : inner) / fact;
    }
    return c;
}

// Unconditional orthant for independent derivatives of variance gamma^2.
double isotropic_orthant(const Face& face, const Eigen::VectorXd& g, double gamma)
{
    double p = 1.0;
    for (std::size_t i = 0; i < face.fixed.size(); ++i)
        p *= normal_cdf(face.outward_sign(i) * g(face.fixed[i]) / gamma);
    return p;
}

FaceContribution isotropic_face(double gamma, const MeanFunction& mean, const Face& face, const Rectangle& box,
                                double u, const QuadratureSpec& quad, BracketArgument arg)
{
    if (face.k == 0) {
        const Eigen::VectorXd t = face.point(Eigen::VectorXd(0), box.dim());
        FaceContribution fc;
        fc.face = face;
        fc.contribution = isotropic_orthant(face, mean.grad(t), gamma) * gaussian_tail(u - mean.eval(t));
        fc.nodes = 1;
        return fc;
    }
    const double prefactor = std::pow(gamma, face.k) * two_pi_power(face.k);
    const FaceGrid grid = face_grid(face, box, quad.nodes_per_axis);
    return integrate_face(face, grid, u, quad, prefactor, [&](const Eigen::VectorXd& t, double& err) {
        err = 0.0;
        const Eigen::VectorXd g = mean.grad(t);
        const Eigen::VectorXd gj = restrict(g, face.sigma);
        NodeIntegrand in;
        in.m = mean.eval(t);
        in.shift = arg == BracketArgument::Residual ? in.m : 0.0;
        in.scale = std::exp(-0.5 * gj.squaredNorm() / (gamma * gamma)) * isotropic_orthant(face, g, gamma);
        in.coeffs = isotropic_polynomial(restrict(mean.hess(t), face.sigma), gamma);
        return in;
    });
}

template <class FaceFn>
EecReport assemble(const Rectangle& t, double u, const QuadratureSpec& quad, FaceFn&& fn)
{
    quad.validate();
    if (!std::isfinite(u))
        throw DomainError("level u must be finite");
    const std::vector<Face> faces = enumerate_faces(t);
    EecReport report;
    report.u = u;
    report.per_face.resize(faces.size());
    parallel_for(faces.size(), [&](std::size_t i) { report.per_face[i] = fn(faces[i]); });
    for (const FaceContribution& fc : report.per_face) {
        report.total += fc.contribution;
        report.tail_bound += fc.tail_bound;
        report.orthant_error += fc.orthant_error;
        report.quad_nodes_used += fc.nodes;
    }
    return report;
}

}  // namespace

FaceContribution face_contribution(const StationaryModel& model, const MeanFunction& mean, const Rectangle& t,
                                   const Face& face, double u, const QuadratureSpec& quad, BracketArgument arg)
{
    quad.validate();
    check_dims(model, mean, t.dim());
    if (static_cast<int>(face.sigma.size() + face.fixed.size()) != t.dim())
        throw DomainError("face does not belong to the rectangle");
    return general_face(model, mean, face, t, u, quad, arg);
}

EecReport expected_euler_rect(const StationaryModel& model, const MeanFunction& mean, const Rectangle& t, double u,
                              const QuadratureSpec& quad, BracketArgument arg)
{
    check_dims(model, mean, t.dim());
    return assemble(t, u, quad, [&](const Face& f) { return general_face(model, mean, f, t, u, quad, arg); });
}

EecReport expected_euler_rect_isotropic(const StationaryModel& model, const MeanFunction& mean, const Rectangle& t,
                                        double u, const QuadratureSpec& quad, BracketArgument arg)
{
    check_dims(model, mean, t.dim());
    const double gamma = model.isotropic_gamma();
    return assemble(t, u, quad, [&](const Face& f) { return isotropic_face(gamma, mean, f, t, u, quad, arg); });
}

namespace {

struct AscentResult {
    Eigen::VectorXd point;
    double value = 0.0;
};

Eigen::VectorXd clamp_to(const Eigen::VectorXd& t, const Rectangle& box)
{
    return t.cwiseMax(box.lo()).cwiseMin(box.hi());
}

AscentResult ascend(const MeanFunction& mean, const Rectangle& box, Eigen::VectorXd t)
{
    const double diam = (box.hi() - box.lo()).norm();
    double value = mean.eval(t);
    for (int iter = 0; iter < 1000; ++iter) {
        const Eigen::VectorXd g = mean.grad(t);
        if (g.norm() < 1e-10)
            break;
        Eigen::VectorXd dir;
        Eigen::LLT<Eigen::MatrixXd> llt(-mean.hess(t));
        if (llt.info() == Eigen::Success)
            dir = llt.solve(g);
        else
            dir = g * (0.1 * diam / g.norm());
        bool moved = false;
        double step = 1.0;
        for (int h = 0; h < 60; ++h, step *= 0.5) {
            const Eigen::VectorXd cand = clamp_to(t + step * dir, box);
            const double v = mean.eval(cand);
            if (v > value) {
                moved = (cand - t).norm() > 1e-15 * (1.0 + t.norm());
                t = cand;
                value = v;
                break;
            }
        }
        if (!moved)
            break;
    }
    return {t, value};
}

}  // namespace

InteriorMaximum find_interior_maximum(const MeanFunction& mean, const Rectangle& box)
{
    const int n = box.dim();
    if (mean.dim() != n)
        throw DomainError("dimension mismatch between mean and domain");
    int starts = 1;
    for (int i = 0; i < n; ++i)
        starts *= 3;
    std::vector<AscentResult> ends;
    for (int s = 0; s < starts; ++s) {
        Eigen::VectorXd t0(n);
        for (int i = 0, r = s; i < n; ++i, r /= 3)
            t0(i) = box.lo()(i) + (r % 3 + 0.5) / 3.0 * (box.hi()(i) - box.lo()(i));
        ends.push_back(ascend(mean, box, t0));
    }
    const auto best = std::max_element(ends.begin(), ends.end(),
                                       [](const AscentResult& a, const AscentResult& b) { return a.value < b.value; });
    const double tol_v = 1e-10 * (1.0 + std::abs(best->value));
    for (const AscentResult& e : ends)
        if (e.value >= best->value - tol_v && (e.point - best->point).norm() > 1e-8)
            throw DomainError("no interior maximum: maximizer of the mean is not unique");
    const Eigen::VectorXd& p = best->point;
    const double edge = 1e-8 * (box.hi() - box.lo()).maxCoeff();
    for (int i = 0; i < n; ++i)
        if (p(i) - box.lo()(i) < edge || box.hi()(i) - p(i) < edge)
            throw DomainError("no interior maximum: maximizer lies on the boundary");
    if (mean.grad(p).norm() > 1e-8)
        throw DomainError("no interior maximum: ascent did not reach a critical point");
    InteriorMaximum out{p, best->value, mean.hess(p)};
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-out.hessian);
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    if (es.eigenvalues().minCoeff() <= 1e-10 * std::max(scale, 1e-300))
        throw DomainError("no interior maximum: Hessian of the mean is degenerate at the maximizer");
    return out;
}

double laplace_asymptotic(const StationaryModel& model, const MeanFunction& mean, const Rectangle& t, double u)
{
    check_dims(model, mean, t.dim());
    if (!(u > 0.0))
        throw DomainError("laplace asymptotic requires u > 0");
    const InteriorMaximum mx = find_interior_maximum(mean, t);
    const double n = t.dim();
    return std::sqrt(model.lambda().determinant()) * std::pow(u, 0.5 * n) / std::sqrt((-mx.hessian).determinant()) *
           gaussian_tail(u - mx.value);
}

}  // namespace eec
