#pragma once

#include <vector>

namespace eec {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [a, b]. Nodes are strictly interior.
QuadRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// n-point periodic trapezoid rule on [offset, offset + period).
QuadRule periodic_trapezoid(int n, double period, double offset = 0.0);

}  // namespace eec
