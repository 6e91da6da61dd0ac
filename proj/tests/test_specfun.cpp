#include "tpa/errors.hpp"
#include "tpa/quadrature.hpp"
#include "tpa/specfun.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

using namespace tpa;

namespace {

constexpr double pi = std::numbers::pi;

// Test-only oracle: adaptive Simpson, independent of the Gauss-Legendre code.
double simpson(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double eps) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), eps, 50);
}

// D(x) = integral_0^x exp(y^2 - x^2) dy, written so nothing overflows.
double dawson_oracle(double x) {
  return adaptive_simpson([x](double y) { return std::exp((y - x) * (y + x)); }, 0.0, x, 1e-14);
}

} // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int order : {2, 5, 16, 32, 64}) {
    const auto& rule = quad::gauss_legendre(order);
    double sum_w = 0.0;
    double moment = 0.0;
    for (int i = 0; i < order; ++i) {
      sum_w += rule.weights[i];
      moment += rule.weights[i] * std::pow(rule.nodes[i], 2 * order - 2);
    }
    CHECK(sum_w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(moment == doctest::Approx(2.0 / (2 * order - 1)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(quad::gauss_legendre(1), UsageError);
  CHECK_THROWS_AS(quad::gauss_legendre(65), UsageError);
}

TEST_CASE("composite axes honour breaks and refinement") {
  const std::vector<double> breaks{-1.0, 0.0, 3.0};
  const auto a0 = quad::composite_axis(breaks, 1.0, 8, 0);
  const auto a1 = quad::composite_axis(breaks, 1.0, 8, 1);
  CHECK(a0.size() == 4 * 8);
  CHECK(a1.size() == 8 * 8);
  double s = 0.0;
  for (std::size_t i = 0; i < a1.size(); ++i)
    s += a1.weights[i] * std::exp(a1.nodes[i]);
  CHECK(s == doctest::Approx(std::exp(3.0) - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("Dawson integral against frozen high-precision values") {
  // 20-digit reference values.
  const std::pair<double, double> ref[] = {
      {0.5, 0.42443638350202229593}, {1.0, 0.53807950691276841914},
      {3.0, 0.17827103061055828734}, {6.0, 0.084542688974543852239},
      {10.0, 0.050253847187598528033}, {20.0, 0.025031367926403671947}};
  for (const auto& [x, d] : ref) {
    CHECK(std::abs(dawson(x) - d) < 1e-10);
    CHECK(std::abs(dawson(-x) + d) < 1e-10);
  }
  CHECK(dawson(0.0) == 0.0);
}

TEST_CASE("Dawson integral against adaptive Simpson across both branches") {
  for (double x : {0.01, 0.3, 0.92, 1.7, 2.5, 4.4, 5.99, 6.0, 6.01, 7.5, 12.0}) {
    INFO("x = " << x);
    CHECK(std::abs(dawson(x) - dawson_oracle(x)) < 1e-10);
  }
}

TEST_CASE("Dawson is continuous at the series switch") {
  CHECK(std::abs(dawson(std::nextafter(6.0, 0.0)) - dawson(std::nextafter(6.0, 7.0))) < 1e-12);
}

TEST_CASE("plasma dispersion values") {
  const auto f0 = plasma_dispersion(0.0);
  CHECK(f0.real() == 1.0);
  CHECK(f0.imag() == 0.0);

  const auto f1 = plasma_dispersion(1.0);
  CHECK(std::abs(f1.real() - 0.367879441171442322) < 1e-15);
  CHECK(std::abs(f1.imag() - 0.607157705841393729) < 1e-10);
  CHECK(std::abs(std::norm(f1) - 0.503975762999197089) < 1e-10);

  const auto f3 = plasma_dispersion(3.0);
  CHECK(std::abs(f3.real() - 0.000123409804086679549) < 1e-15);
  CHECK(std::abs(f3.imag() - 0.201157317037600387) < 1e-10);
  CHECK(std::abs(std::norm(f3) - 0.0404642814277454195) < 1e-10);

  CHECK(std::abs(std::norm(plasma_dispersion(10.0)) - 0.00321550173510720161) < 1e-12);
  CHECK(std::abs(std::norm(plasma_dispersion(30.0)) - 0.000354071392793459323) < 1e-13);
}

TEST_CASE("|F|^2 is even and approaches 1/(pi xi^2)") {
  for (double xi : {0.3, 2.0, 7.0})
    CHECK(std::norm(plasma_dispersion(xi)) == doctest::Approx(std::norm(plasma_dispersion(-xi))).epsilon(1e-15));
  CHECK(30.0 * 30.0 * std::norm(plasma_dispersion(30.0)) * pi == doctest::Approx(1.0011132778).epsilon(1e-9));
}

TEST_CASE("special functions reject non-finite input") {
  CHECK_THROWS_AS(dawson(std::nan("")), DomainError);
  CHECK_THROWS_AS(dawson(INFINITY), DomainError);
  CHECK_THROWS_AS(plasma_dispersion(-INFINITY), DomainError);
  CHECK_THROWS_AS(sinc(std::nan("")), DomainError);
}

TEST_CASE("sinc") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-6) == doctest::Approx(1.0 - 1e-12 / 6.0).epsilon(1e-16));
  CHECK(sinc(2.0) == doctest::Approx(std::sin(2.0) / 2.0).epsilon(1e-15));
  CHECK(std::abs(sinc(pi)) < 1e-16);
  CHECK(std::abs(sinc(2 * pi)) < 1e-16);
}

namespace {

// Time-domain route for the kernel: transform g(t) theta(-t) directly.
cplx ordered_transform(const std::function<double(double)>& g, double omega, double lo) {
  const double re =
      adaptive_simpson([&](double t) { return g(t) * std::cos(omega * t); }, lo, 0.0, 1e-13);
  const double im =
      adaptive_simpson([&](double t) { return g(t) * std::sin(omega * t); }, lo, 0.0, 1e-13);
  return {re, im};
}

} // namespace

TEST_CASE("Heaviside kernel matches multiply-then-transform on a Gaussian") {
  // g(t) = exp(-t^2), f(w) = integral g e^{iwt} dt = sqrt(pi) exp(-w^2/4).
  auto f = [](double w) { return cplx{std::sqrt(pi) * std::exp(-w * w / 4.0), 0.0}; };
  auto g = [](double t) { return std::exp(-t * t); };
  KernelGrid grid{0.5, 0.0, 0.25};
  for (double w : {-3.0, -0.7, 0.0, 0.4, 2.2, 5.0}) {
    grid.half_extent = std::abs(w) + 20.0;
    const cplx k = heaviside_kernel_apply(f, w, grid);
    const cplx t = ordered_transform(g, w, -12.0);
    INFO("w = " << w);
    CHECK(std::abs(k - t) < 1e-6 * std::abs(t));
  }
}

TEST_CASE("Heaviside kernel on a slowly decaying Lorentzian") {
  // g(t) = exp(-|t|): f(w) = 2 / (1 + w^2), ordered transform 1 / (1 + i w).
  auto f = [](double w) { return cplx{2.0 / (1.0 + w * w), 0.0}; };
  KernelGrid grid{0.25, 2e4, 0.125};
  grid.tolerance = 1e-8;
  for (double w : {-2.0, 0.0, 0.5, 3.0}) {
    const cplx k = heaviside_kernel_apply(f, w, grid);
    const cplx exact = 1.0 / cplx{1.0, w};
    INFO("w = " << w);
    CHECK(std::abs(k - exact) < 1e-6 * std::abs(exact));
  }
}

TEST_CASE("Heaviside kernel validates its grid and detects under-resolution") {
  auto f = [](double w) { return cplx{std::exp(-w * w), 0.0}; };
  CHECK_THROWS_AS(heaviside_kernel_apply(f, 0.0, KernelGrid{0.0, 10.0, 0.1}), DomainError);
  CHECK_THROWS_AS(heaviside_kernel_apply(f, 0.0, KernelGrid{0.1, 10.0, 0.5}), DomainError);
  CHECK_THROWS_AS(heaviside_kernel_apply(f, 0.0, KernelGrid{1.0, 1.2, 0.5}), DomainError);
  // Oscillation on a scale of 1/50 with panels of width 5.
  auto rough = [](double w) { return cplx{std::cos(50.0 * w) * std::exp(-w * w / 100.0), 0.0}; };
  CHECK_THROWS_AS(heaviside_kernel_apply(rough, 0.3, KernelGrid{5.0, 60.0, 2.5}), AccuracyError);
}
