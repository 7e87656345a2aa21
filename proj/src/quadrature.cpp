#include "eec/quadrature.hpp"

#include "eec/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace eec {

namespace {

// Newton iteration on P_n from the Tricomi initial guesses.
QuadRule legendre_reference(int n)
{
    QuadRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        // Recompute derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[static_cast<std::size_t>(i)] = -x;
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        r.weights[static_cast<std::size_t>(i)] = w;
        r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1)
        r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return r;
}

const QuadRule& cached_reference(int n)
{
    static std::mutex mutex;
    static std::map<int, QuadRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, legendre_reference(n)).first;
    return it->second;
}

}  // namespace

QuadRule gauss_legendre(int n, double a, double b)
{
    if (n < 1)
        throw DomainError("gauss_legendre: need at least one node");
    const QuadRule& ref = cached_reference(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    QuadRule r;
    r.nodes.resize(ref.size());
    r.weights.resize(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        r.nodes[i] = mid + half * ref.nodes[i];
        r.weights[i] = half * ref.weights[i];
    }
    return r;
}

QuadRule periodic_trapezoid(int n, double period, double offset)
{
    if (n < 1)
        throw DomainError("periodic_trapezoid: need at least one node");
    QuadRule r;
    const double h = period / n;
    for (int i = 0; i < n; ++i) {
        r.nodes.push_back(offset + h * i);
        r.weights.push_back(h);
    }
    return r;
}

}  // namespace eec
