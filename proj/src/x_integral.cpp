#include "x_integral.hpp"

#include <algorithm>
#include <cmath>

namespace eec::detail {

constexpr double x_span = 12.0;

// The discarded ends are bounded by g(edge) / (d - k) with
// g = sum|c_j| (1 + |x - shift|)^k exp(-(x - m)^2 / 2), whose log-derivative
// decays at rate at least d - k beyond an edge d away from m.
XIntegral integrate_x(const NodeIntegrand& in, double u, const QuadRule& ref)
{
    XIntegral out;
    if (in.scale == 0.0)
        return out;
    const auto k = static_cast<int>(in.coeffs.size()) - 1;
    const double lo = std::max(u, in.m - x_span);
    const double hi = std::max(u, in.m) + x_span;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double x = mid + half * ref.nodes[i];
        const double y = x - in.shift;
        double p = 0.0;
        for (double c : in.coeffs)
            p = p * y + c;
        const double d = x - in.m;
        sum += ref.weights[i] * std::exp(-0.5 * d * d) * p;
    }
    out.value = in.scale * half * sum;

    double abs_coeffs = 0.0;
    for (double c : in.coeffs)
        abs_coeffs += std::abs(c);
    auto edge_bound = [&](double edge) {
        const double d = std::abs(edge - in.m);
        return abs_coeffs * std::pow(1.0 + std::abs(edge - in.shift), k) * std::exp(-0.5 * d * d) / (d - k);
    };
    double tail = edge_bound(hi);
    if (lo > u)
        tail += edge_bound(lo);
    out.tail = std::abs(in.scale) * tail;
    return out;
}

}  // namespace eec::detail
