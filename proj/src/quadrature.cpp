#include "tpa/quadrature.hpp"

#include "tpa/errors.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

namespace tpa::quad {

namespace {

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16)
        break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1)
    rule.nodes[n / 2] = 0.0;
  return rule;
}

constexpr int kMaxOrder = 64;

} // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 2 || order > kMaxOrder)
    throw UsageError("Gauss-Legendre order must lie in [2, 64]");
  static std::array<GaussLegendreRule, kMaxOrder + 1> cache;
  static std::array<std::once_flag, kMaxOrder + 1> flags;
  std::call_once(flags[order], [order] { cache[order] = build_rule(order); });
  return cache[order];
}

Axis composite_axis(std::span<const double> breaks, double max_panel,
                    int order, int refinement) {
  if (breaks.size() < 2)
    throw UsageError("composite_axis needs at least two break points");
  if (!(max_panel > 0.0))
    throw UsageError("composite_axis needs a positive panel width");
  const auto& rule = gauss_legendre(order);
  Axis axis;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double a = breaks[s];
    const double b = breaks[s + 1];
    if (!(b > a))
      continue;
    long panels = static_cast<long>(std::ceil((b - a) / max_panel));
    panels = std::max(1L, panels) << refinement;
    const double width = (b - a) / static_cast<double>(panels);
    for (long p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * width;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        axis.nodes.push_back(mid + 0.5 * width * rule.nodes[k]);
        axis.weights.push_back(0.5 * width * rule.weights[k]);
      }
    }
  }
  return axis;
}

Axis composite_axis(double lo, double hi, double max_panel, int order,
                    int refinement) {
  const std::array<double, 2> breaks{lo, hi};
  return composite_axis(breaks, max_panel, order, refinement);
}

} // namespace tpa::quad
