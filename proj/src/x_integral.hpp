#pragma once

#include "eec/quadrature.hpp"

#include <vector>

namespace eec::detail {

// Per-node input of the level integral: the integrand is
// scale * exp(-(x - m)^2 / 2) * sum_j coeffs[j] (x - shift)^{k-j}.
struct NodeIntegrand {
    double scale = 0.0;
    double m = 0.0;
    double shift = 0.0;
    std::vector<double> coeffs;
};

struct XIntegral {
    double value = 0.0;
    double tail = 0.0;  // bound on the discarded part of [u, inf)
};

// Integral over x in [u, inf) with the Gauss-Legendre rule `ref` on [-1, 1]
// mapped to [max(u, m - 12), max(u, m) + 12].
XIntegral integrate_x(const NodeIntegrand& in, double u, const QuadRule& ref);

}  // namespace eec::detail
