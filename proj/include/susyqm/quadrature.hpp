#pragma once

#include <cstddef>
#include <vector>

namespace susyqm {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Rule of the given order (at least 2); computed once per order and cached
/// (thread-safe).
const GaussLegendreRule& gauss_legendre(std::size_t order);

}  // namespace susyqm
