#include "tpa/specfun.hpp"

#include "tpa/errors.hpp"
#include "tpa/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace tpa {

namespace {

constexpr double kRkLimit = 6.0;
constexpr double kRkStep = 1.0 / 2048.0;

double dawson_rhs(double x, double d) { return 1.0 - 2.0 * x * d; }

double rk4_step(double x, double d, double h) {
  const double k1 = dawson_rhs(x, d);
  const double k2 = dawson_rhs(x + 0.5 * h, d + 0.5 * h * k1);
  const double k3 = dawson_rhs(x + 0.5 * h, d + 0.5 * h * k2);
  const double k4 = dawson_rhs(x + h, d + h * k3);
  return d + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
}

// D at x_k = k * kRkStep for 0 <= x_k <= kRkLimit.
const std::vector<double>& dawson_table() {
  static const std::vector<double> table = [] {
    const auto n = static_cast<std::size_t>(kRkLimit / kRkStep) + 1;
    std::vector<double> t(n);
    t[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k)
      t[k] = rk4_step((k - 1) * kRkStep, t[k - 1], kRkStep);
    return t;
  }();
  return table;
}

double dawson_asymptotic(double x) {
  const double inv_2x2 = 0.5 / (x * x);
  double term = 0.5 / x;
  double sum = term;
  for (int n = 0; n < 200; ++n) {
    const double next = term * (2.0 * n + 1.0) * inv_2x2;
    if (next >= term || next < 1e-18 * sum)
      break;
    sum += next;
    term = next;
  }
  return sum;
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x))
    throw DomainError(std::string(what) + ": argument must be finite");
}

} // namespace

double dawson(double x) {
  require_finite(x, "dawson");
  const double ax = std::abs(x);
  double value = 0.0;
  if (ax <= kRkLimit) {
    const auto& table = dawson_table();
    const auto k = static_cast<std::size_t>(std::lround(ax / kRkStep));
    const double xk = k * kRkStep;
    value = rk4_step(xk, table[k], ax - xk);
  } else {
    value = dawson_asymptotic(ax);
  }
  return x < 0.0 ? -value : value;
}

PlasmaDispersionValue plasma_dispersion(double xi) {
  require_finite(xi, "plasma_dispersion");
  return {std::exp(-xi * xi), 2.0 / std::sqrt(std::numbers::pi) * dawson(xi)};
}

double sinc(double x) {
  require_finite(x, "sinc");
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

namespace {

constexpr int kKernelOrder = 16;

cplx principal_value(const std::function<cplx(double)>& f, double omega,
                     const KernelGrid& grid, int refinement) {
  auto paired = [&](double s) { return (f(omega - s) - f(omega + s)) / s; };
  cplx sum{0.0, 0.0};
  // Pole window: the paired integrand is regular, and Gauss-Legendre nodes
  // never sit on s = 0.
  const auto window =
      quad::composite_axis(0.0, grid.pv_halfwidth, grid.pv_halfwidth,
                           kKernelOrder, refinement);
  for (std::size_t i = 0; i < window.size(); ++i)
    sum += window.weights[i] * paired(window.nodes[i]);
  const auto body =
      quad::composite_axis(grid.pv_halfwidth, grid.half_extent, grid.spacing,
                           kKernelOrder, refinement);
  for (std::size_t i = 0; i < body.size(); ++i)
    sum += body.weights[i] * paired(body.nodes[i]);
  return sum;
}

} // namespace

cplx heaviside_kernel_apply(const std::function<cplx(double)>& f, double omega,
                            const KernelGrid& grid) {
  require_finite(omega, "heaviside_kernel_apply");
  if (!(grid.spacing > 0.0) || !std::isfinite(grid.spacing))
    throw DomainError("heaviside_kernel_apply: spacing must be positive");
  if (!(grid.pv_halfwidth > 0.0) || grid.pv_halfwidth >= 4.0 * grid.spacing)
    throw DomainError(
        "heaviside_kernel_apply: pv_halfwidth must lie in (0, 4 * spacing)");
  if (!(grid.half_extent > grid.pv_halfwidth + grid.spacing))
    throw DomainError(
        "heaviside_kernel_apply: half_extent must exceed the pole window");

  const cplx centre = f(omega);
  const cplx coarse = principal_value(f, omega, grid, 0);
  const cplx fine = principal_value(f, omega, grid, 1);
  const cplx i_over_2pi{0.0, 0.5 / std::numbers::pi};
  const cplx result = 0.5 * centre - i_over_2pi * fine;

  const double scale = std::max(std::abs(centre), std::abs(result));
  const double drift = std::abs(fine - coarse) * 0.5 / std::numbers::pi;
  if (drift > grid.tolerance * scale + grid.abs_tolerance)
    throw AccuracyError("heaviside_kernel_apply: grid too coarse to resolve f "
                        "(step-halving drift " +
                        std::to_string(drift) + ")");
  return result;
}

} // namespace tpa
