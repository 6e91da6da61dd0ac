#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tpa::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (2 <= order <= 64). Thread-safe.
const GaussLegendreRule& gauss_legendre(int order);

/// A flattened composite rule: integral ~ sum_i weights[i] * f(nodes[i]).
struct Axis {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Composite Gauss-Legendre rule over consecutive segments
/// [breaks[0], breaks[1]], [breaks[1], breaks[2]], ...
/// Each segment is split into equal panels no wider than `max_panel`.
/// `refinement` doubles the panel count that many times.
Axis composite_axis(std::span<const double> breaks, double max_panel,
                    int order, int refinement = 0);

/// Convenience overload for a single interval.
Axis composite_axis(double lo, double hi, double max_panel, int order,
                    int refinement = 0);

} // namespace tpa::quad
