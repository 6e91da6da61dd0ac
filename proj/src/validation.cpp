#include "tpa/validation.hpp"

#include "tpa/errors.hpp"
#include "tpa/spectral.hpp"
#include "tpa/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace tpa {

namespace {

constexpr double kPi = std::numbers::pi;
const ThreeLevelAtom kAtom{1000.0, 1000.0, 1.0, 1.0};

struct Measurement {
  double value = 0.0;
  std::string detail;
  bool ok = true; // extra condition beyond value < tolerance
};

void run_check(std::vector<CheckResult>& out, const std::string& name, double tolerance,
               const std::function<Measurement()>& body) {
  CheckResult r;
  r.name = name;
  r.tolerance = tolerance;
  try {
    const auto m = body();
    r.measured = m.value;
    r.detail = m.detail;
    r.passed = m.ok && std::isfinite(m.value) && m.value < tolerance;
  } catch (const std::exception& e) {
    r.measured = std::nan("");
    r.detail = std::string("exception: ") + e.what();
    r.passed = false;
  }
  out.push_back(std::move(r));
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i)
    x[i] = a + (b - a) * i / (n - 1);
  return x;
}

// Largest deviation of `other` from the closed form over xi values, relative
// where |closed| exceeds `floor` and absolute elsewhere.
Measurement psi_tilde_agreement(PairFamily family, double T, double tau,
                                const std::vector<double>& xis, SpectralPath other,
                                double floor) {
  double worst_rel = 0.0;
  double worst_abs = 0.0;
  for (double xi : xis) {
    const auto b = resonant_pair(family, T, tau, kAtom, xi / tau);
    const cplx c = time_ordered_spectrum(b, kAtom.Omega_a, kAtom.Omega_b);
    const cplx q = time_ordered_spectrum(b, kAtom.Omega_a, kAtom.Omega_b, other);
    if (std::abs(c) > floor)
      worst_rel = std::max(worst_rel, std::abs(q - c) / std::abs(c));
    else
      worst_abs = std::max(worst_abs, std::abs(q - c));
  }
  std::ostringstream d;
  d << xis.size() << " points, max relative " << worst_rel << ", max absolute at zeros "
    << worst_abs;
  return {worst_rel, d.str(), worst_abs < 1e-10};
}

void fast_checks(std::vector<CheckResult>& out) {
  run_check(out, "gaussian_psi_tilde_closed_vs_quadrature", 1e-5, [] {
    return psi_tilde_agreement(PairFamily::gaussian, 1.0, 0.01, linspace(-5, 5, 13),
                               SpectralPath::time_domain_quadrature, 0.0);
  });
  run_check(out, "rectangular_psi_tilde_closed_vs_quadrature", 1e-5, [] {
    auto xis = linspace(-5, 5, 13);
    xis.insert(xis.end(), {-2 * kPi, 2 * kPi, 4 * kPi});
    return psi_tilde_agreement(PairFamily::rectangular, 1.0, 0.01, xis,
                               SpectralPath::time_domain_quadrature, 1e-12);
  });
  run_check(out, "transparency_quadrature_p2", 1e-10, [] {
    const double delta = 200.0 * kPi;
    const auto pts = transparency_points(delta, 3);
    double worst = 0.0;
    for (double tau : pts.two_photon_zeros) {
      const auto b = resonant_pair(PairFamily::rectangular, 1.0, tau, kAtom, delta);
      worst = std::max(worst, p2_pair(b, kAtom, SpectralPath::time_domain_quadrature).value);
    }
    return Measurement{worst, "max quadrature P2 at tau = 2 pi n / Delta, n = 1..3"};
  });
  run_check(out, "suppression_closed_form", 1e-12, [] {
    const double delta = 200.0 * kPi;
    const auto pts = transparency_points(delta, 2);
    double worst = 0.0;
    bool p2_ok = true;
    for (std::size_t n = 0; n < pts.one_photon_zeros_with_p2_max.size(); ++n) {
      const double tau = pts.one_photon_zeros_with_p2_max[n];
      const auto r = closed_form_rectangular(kAtom, 1.0, tau, delta);
      const double a_sq = std::pow(rectangular_spectral_amplitude(1.0, tau), 2);
      const double expected = 4.0 * a_sq / std::pow(2.0 * n + 1.0, 2);
      worst = std::max(worst, r.P1);
      p2_ok = p2_ok && r.P2 > 0.0 && std::abs(r.P2 - expected) <= 1e-12 * expected;
    }
    return Measurement{worst, "max closed-form P1 at tau = pi(2n+1)/Delta; P2 matches 4 A2^2/(2n+1)^2",
                       p2_ok};
  });
  run_check(out, "ratio_identity_at_zero_detuning", 1e-12, [] {
    const double T = 1.0;
    const double expected = std::sqrt(kPi / 2.0) * kAtom.r2 * T;
    const double g = *closed_form_gaussian(kAtom, T, 0.01, 0.0).ratio;
    const double r = *closed_form_rectangular(kAtom, T, 0.01, 0.0).ratio;
    const double err = std::max(std::abs(g - expected), std::abs(r - expected)) / expected;
    return Measurement{err, "R_G and R_r against sqrt(pi/2) r2 T"};
  });
  run_check(out, "ratio_matches_p2_over_p1", 1e-12, [] {
    double worst = 0.0;
    for (double xi : {0.0, 0.5, 1.0, 2.0, 3.0}) {
      for (auto fam : {PairFamily::gaussian, PairFamily::rectangular}) {
        const auto r = closed_form(fam, kAtom, 1.0, 0.01, xi / 0.01);
        worst = std::max(worst, std::abs(*r.ratio - r.P2 / r.P1) / *r.ratio);
      }
    }
    return Measurement{worst, "independent ratio expression against P2/P1"};
  });
  run_check(out, "asymptotic_separation_gaussian", 1e-2, [] {
    const double f3 = std::norm(plasma_dispersion(3.0));
    const double enhancement = f3 / std::exp(-18.0);
    const double f30 = std::norm(plasma_dispersion(30.0));
    const double err = std::abs(900.0 * f30 * kPi - 1.0);
    std::ostringstream d;
    d << "|F(3)|^2 / e^-18 = " << enhancement << "; 30^2 |F(30)|^2 pi - 1 = " << err;
    return Measurement{err, d.str(), enhancement > 1e5};
  });
  run_check(out, "time_domain_normalization", 1e-8, [] {
    double worst = 0.0;
    for (auto fam : {PairFamily::gaussian, PairFamily::rectangular})
      for (double tau : {0.001, 0.01, 0.1})
        worst = std::max(worst,
                         normalization_check(resonant_pair(fam, 1.0, tau, kAtom, 0.0)).residual);
    return Measurement{worst, "both families, T = 1, tau in {0.001, 0.01, 0.1}"};
  });
  run_check(out, "p2_closed_vs_quadrature", 1e-4, [] {
    double worst = 0.0;
    for (auto fam : {PairFamily::gaussian, PairFamily::rectangular})
      for (double xi : {0.0, 1.5, 4.0, 9.0}) {
        const auto b = resonant_pair(fam, 1.0, 0.01, kAtom, xi / 0.01);
        const double c = p2_pair(b, kAtom).value;
        const double q = p2_pair(b, kAtom, SpectralPath::time_domain_quadrature).value;
        worst = std::max(worst, std::abs(q - c) / c);
      }
    return Measurement{worst, "P2 at 8 points, tau/T = 0.01"};
  });
}

void full_checks(std::vector<CheckResult>& out) {
  run_check(out, "gaussian_psi_tilde_oracle_25", 1e-5, [] {
    return psi_tilde_agreement(PairFamily::gaussian, 1.0, 0.01, linspace(-5, 5, 25),
                               SpectralPath::time_domain_quadrature, 0.0);
  });
  run_check(out, "rectangular_psi_tilde_oracle_25", 1e-5, [] {
    return psi_tilde_agreement(PairFamily::rectangular, 1.0, 0.01, linspace(-5, 5, 25),
                               SpectralPath::time_domain_quadrature, 1e-12);
  });
  for (double tau : {0.01, 0.1}) {
    for (auto path : {SpectralPath::time_domain_quadrature, SpectralPath::kernel_convolution}) {
      std::ostringstream name;
      name << "gaussian_psi_tilde_closed_vs_" << (path == SpectralPath::kernel_convolution ? "kernel" : "quadrature")
           << "_tau_" << tau;
      run_check(out, name.str(), 1e-5, [tau, path] {
        return psi_tilde_agreement(PairFamily::gaussian, 1.0, tau, linspace(-5, 5, 11), path, 0.0);
      });
    }
  }
  run_check(out, "plancherel_norm", 2e-6, [] {
    double worst = 0.0;
    for (auto fam : {PairFamily::gaussian, PairFamily::rectangular})
      for (double tau : {0.001, 0.01, 0.1})
        worst = std::max(worst,
                         std::abs(plancherel_norm(resonant_pair(fam, 1.0, tau, kAtom, 0.0)) - 1.0));
    return Measurement{worst, "both families, T = 1, tau in {0.001, 0.01, 0.1}"};
  });
  for (auto fam : {PairFamily::gaussian, PairFamily::rectangular}) {
    run_check(out, "scaling_exponents_" + to_string(fam), 1.0, [fam] {
      const auto e = scaling_law_check(fam, {}, kAtom);
      const double dT = std::abs(e.T - 1.0);
      const double dtau = std::abs(e.tau + 1.0);
      const double ddelta = std::abs(e.delta + 2.0);
      std::ostringstream d;
      d << "T " << e.T << " (+-0.01), tau " << e.tau << " (+-0.05), Delta " << e.delta
        << " (+-0.05)";
      // Normalised so that 1.0 marks the edge of the widest band.
      const double worst = std::max({dT / 0.01, dtau / 0.05, ddelta / 0.05});
      return Measurement{worst, d.str()};
    });
  }
  run_check(out, "p1_delta_approximation_T_over_tau_100", 0.02, [] {
    std::vector<double> errs;
    for (double ratio : {10.0, 100.0, 1000.0}) {
      const double tau = 1.0 / ratio;
      const auto b = resonant_pair(PairFamily::gaussian, 1.0, tau, kAtom, 0.5 / tau);
      const double c = p1_pair(b, kAtom, P1Method::closed_form).value;
      const double q = p1_pair(b, kAtom, P1Method::quadrature).value;
      errs.push_back(std::abs(c - q) / q);
    }
    std::ostringstream d;
    d << "relative error at T/tau = 10, 100, 1000: " << errs[0] << ", " << errs[1] << ", "
      << errs[2];
    return Measurement{errs[1], d.str(), errs[0] > errs[1] && errs[1] > errs[2]};
  });
  run_check(out, "suppression_quadrature_tau_over_T_1e-3", 1e-8, [] {
    const double tau = 1e-3;
    const auto b = resonant_pair(PairFamily::rectangular, 1.0, tau, kAtom, kPi / tau);
    const double p1 = p1_pair(b, kAtom, P1Method::quadrature).value;
    const double p2q = p2_pair(b, kAtom, SpectralPath::time_domain_quadrature).value;
    const double p2c = p2_pair(b, kAtom).value;
    std::ostringstream d;
    d << "quadrature P1 " << p1 << ", P2 quadrature/closed - 1 = " << p2q / p2c - 1.0;
    return Measurement{p1, d.str(), std::abs(p2q / p2c - 1.0) < 0.01};
  });
  run_check(out, "sampled_grid_plancherel", 1e-6, [] {
    SamplingSpec s;
    s.nu = 128;
    s.nv = 128;
    const auto b = make_sampled(resonant_pair(PairFamily::gaussian, 1.0, 0.1, kAtom, 0.0), s);
    return Measurement{std::abs(plancherel_norm(b) - 1.0), "128 x 128 Gaussian grid"};
  });
}

} // namespace

ValidationLevel parse_validation_level(const std::string& text) {
  if (text == "fast")
    return ValidationLevel::fast;
  if (text == "full")
    return ValidationLevel::full;
  throw UsageError("unknown validation level '" + text + "' (expected fast or full)");
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

nlohmann::ordered_json ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["level"] = level == ValidationLevel::fast ? "fast" : "full";
  j["passed"] = passed();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    if (std::isfinite(c.measured))
      e["measured"] = c.measured;
    else
      e["measured"] = nullptr;
    e["tolerance"] = c.tolerance;
    e["detail"] = c.detail;
    arr.push_back(e);
  }
  j["checks"] = arr;
  return j;
}

ValidationReport run_validate(ValidationLevel level) {
  ValidationReport report;
  report.level = level;
  fast_checks(report.checks);
  if (level == ValidationLevel::full)
    full_checks(report.checks);
  return report;
}

} // namespace tpa
