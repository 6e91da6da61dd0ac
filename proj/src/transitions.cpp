#include "tpa/transitions.hpp"

#include "tpa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tpa {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPerturbativeBound = 0.1;
// Relative to the Delta = 0 scale: below kZeroFloor a probability counts as
// vanishing, below kRatioFloor it is rounding noise (sinc zeros land near 1e-33).
constexpr double kZeroFloor = 1e-12;
constexpr double kRatioFloor = 1e-24;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError(std::string(what) + " must be positive and finite");
}

// Peak |Psi|^2, used to judge when a probability is numerically zero.
double peak_joint_intensity(const Biphoton& b) {
  const double T = b.coherence_time();
  const double tau = b.correlation_time();
  switch (b.kind()) {
  case BiphotonKind::rectangular:
    return std::pow(rectangular_spectral_amplitude(T, tau), 2);
  case BiphotonKind::separable_product: {
    const double w1 = b.photon(1)->width();
    const double w2 = b.photon(2)->width();
    return 1.0 / (2.0 * kPi * w1 * w2);
  }
  default:
    return std::pow(gaussian_spectral_amplitude(T, tau), 2);
  }
}

double p2_scale(const Biphoton& b, const ThreeLevelAtom& atom) {
  return kPi * kPi * atom.r1 * atom.r2 * peak_joint_intensity(b);
}

double p1_scale(const Biphoton& b, const ThreeLevelAtom& atom) {
  if (b.kind() == BiphotonKind::separable_product)
    return 2.0 * kPi * atom.r1 / (std::sqrt(2.0 * kPi) * b.photon(1)->width());
  return std::sqrt(2.0) * std::pow(kPi, 1.5) * atom.r1 * peak_joint_intensity(b) /
         b.coherence_time();
}

void regime_flags(Flags& flags, double T, double tau) {
  if (T / tau < 10.0)
    flags.set(Flag::T_over_tau_small);
  if (!(tau < T))
    flags.set(Flag::tau_not_below_T);
}

void finish(TransitionResult& r, double p1_scale_value, double p2_scale_value,
            std::optional<double> independent_ratio = std::nullopt) {
  if (r.P1 > kPerturbativeBound || r.P2 > kPerturbativeBound)
    r.flags.set(Flag::perturbative_bound_exceeded);
  if (r.P1 <= kZeroFloor * p1_scale_value)
    r.flags.set(Flag::one_photon_suppressed);
  if (r.P2 <= kZeroFloor * p2_scale_value)
    r.flags.set(Flag::two_photon_transparent);

  const double ratio = independent_ratio ? *independent_ratio : r.P2 / r.P1;
  if (r.P1 <= kRatioFloor * p1_scale_value || !std::isfinite(ratio)) {
    r.ratio.reset();
    r.flags.set(Flag::ratio_undefined);
  } else {
    r.ratio = ratio;
  }
}

double snap_to_peak(double xi) {
  // Nearest (2k + 1) pi with k >= 0.
  const double k = std::max(0.0, std::round((xi / kPi - 1.0) / 2.0));
  return (2.0 * k + 1.0) * kPi;
}

} // namespace

void ThreeLevelAtom::validate() const {
  require_positive(Omega_a, "Omega_a");
  require_positive(Omega_b, "Omega_b");
  require_positive(r1, "r1");
  require_positive(r2, "r2");
}

void TwoLevelAtom::validate() const {
  require_positive(Omega, "Omega");
  require_positive(r, "r");
}

std::string to_string(Flag f) {
  switch (f) {
  case Flag::perturbative_bound_exceeded:
    return "perturbative_bound_exceeded";
  case Flag::two_photon_resonance_off:
    return "two_photon_resonance_off";
  case Flag::T_over_tau_small:
    return "T_over_tau_small";
  case Flag::tau_not_below_T:
    return "tau_not_below_T";
  case Flag::one_photon_suppressed:
    return "one_photon_suppressed";
  case Flag::two_photon_transparent:
    return "two_photon_transparent";
  case Flag::ratio_undefined:
    return "ratio_undefined";
  case Flag::evaluation_failed:
    return "evaluation_failed";
  }
  return "unknown";
}

std::vector<std::string> Flags::names() const {
  std::vector<std::string> out;
  for (unsigned bit = 1; bit <= static_cast<unsigned>(Flag::evaluation_failed); bit <<= 1)
    if (bits_ & bit)
      out.push_back(to_string(static_cast<Flag>(bit)));
  return out;
}

std::string Flags::joined() const {
  std::string out;
  for (const auto& n : names()) {
    if (!out.empty())
      out += '|';
    out += n;
  }
  return out;
}

double detuning(const Biphoton& b, const ThreeLevelAtom& atom) {
  return 0.5 * (atom.Omega_a - atom.Omega_b) - b.omega_minus_bar();
}

Probability p1_single_photon(const OnePhotonEnvelope& env, const TwoLevelAtom& atom) {
  atom.validate();
  Probability p;
  p.value = 2.0 * kPi * atom.r * std::norm(env.spectrum(atom.Omega));
  if (p.value > kPerturbativeBound)
    p.flags.set(Flag::perturbative_bound_exceeded);
  return p;
}

Probability p2_pair(const Biphoton& b, const ThreeLevelAtom& atom, SpectralPath path,
                    const QuadratureSettings& settings) {
  atom.validate();
  Probability p;
  const cplx amp = time_ordered_spectrum(b, atom.Omega_a, atom.Omega_b, path, settings);
  p.value = 4.0 * kPi * kPi * atom.r1 * atom.r2 * std::norm(amp);
  if (p.value > kPerturbativeBound)
    p.flags.set(Flag::perturbative_bound_exceeded);
  if (std::abs(b.omega_plus_bar() - (atom.Omega_a + atom.Omega_b)) * b.coherence_time() > 3.0)
    p.flags.set(Flag::two_photon_resonance_off);
  return p;
}

Probability p1_pair(const Biphoton& b, const ThreeLevelAtom& atom, P1Method method,
                    const QuadratureSettings& settings) {
  atom.validate();
  Probability p;
  const double T = b.coherence_time();
  const double tau = b.correlation_time();
  if (method == P1Method::quadrature) {
    const auto route = b.kind() == BiphotonKind::sampled_grid ? MarginalRoute::spectral
                                                              : MarginalRoute::time_domain;
    p.value = 2.0 * kPi * atom.r1 *
              one_photon_marginal_spectrum(b, atom.Omega_a, route, settings);
  } else {
    const double x = (atom.Omega_a - b.omega1_bar()) * tau;
    const double prefactor = std::sqrt(2.0) * std::pow(kPi, 1.5) * atom.r1 / T;
    switch (b.kind()) {
    case BiphotonKind::gaussian:
      p.value = prefactor * std::pow(gaussian_spectral_amplitude(T, tau), 2) *
                std::exp(-2.0 * x * x);
      break;
    case BiphotonKind::rectangular:
      p.value = prefactor * std::pow(rectangular_spectral_amplitude(T, tau), 2) *
                std::pow(sinc(x), 2);
      break;
    case BiphotonKind::separable_product:
      p.value = 2.0 * kPi * atom.r1 * std::norm(b.photon(1)->spectrum(atom.Omega_a));
      break;
    case BiphotonKind::sampled_grid:
      throw UsageError("p1_pair: no closed form for sampled biphotons; use quadrature");
    }
  }
  if (b.kind() != BiphotonKind::separable_product && T / tau < 10.0)
    p.flags.set(Flag::T_over_tau_small);
  if (p.value > kPerturbativeBound)
    p.flags.set(Flag::perturbative_bound_exceeded);
  return p;
}

TransitionResult evaluate_pair(const Biphoton& b, const ThreeLevelAtom& atom, SpectralPath path,
                               const QuadratureSettings& settings) {
  const auto p2 = p2_pair(b, atom, path, settings);
  const auto method =
      path == SpectralPath::closed_form ? P1Method::closed_form : P1Method::quadrature;
  const auto p1 = p1_pair(b, atom, method, settings);

  TransitionResult r;
  r.P1 = p1.value;
  r.P2 = p2.value;
  r.delta = detuning(b, atom);
  r.flags |= p1.flags;
  r.flags |= p2.flags;
  if (b.kind() != BiphotonKind::separable_product)
    regime_flags(r.flags, b.coherence_time(), b.correlation_time());
  finish(r, p1_scale(b, atom), p2_scale(b, atom));
  return r;
}

std::string to_string(PairFamily family) {
  return family == PairFamily::gaussian ? "gaussian" : "rectangular";
}

PairFamily parse_pair_family(const std::string& text) {
  if (text == "gaussian")
    return PairFamily::gaussian;
  if (text == "rectangular")
    return PairFamily::rectangular;
  throw UsageError("unknown family '" + text + "' (expected gaussian or rectangular)");
}

TransitionResult closed_form_gaussian(const ThreeLevelAtom& atom, double T, double tau,
                                      double delta) {
  atom.validate();
  require_positive(T, "T");
  require_positive(tau, "tau");
  const double xi = delta * tau;
  const double a_sq = 2.0 * tau * T / kPi;
  const double f_sq = std::norm(plasma_dispersion(xi));
  const double envelope = std::exp(-2.0 * xi * xi);

  TransitionResult r;
  r.delta = delta;
  r.P2 = kPi * kPi * atom.r1 * atom.r2 * a_sq * f_sq;
  r.P1 = std::sqrt(2.0) * std::pow(kPi, 1.5) * atom.r1 * a_sq * envelope / T;
  regime_flags(r.flags, T, tau);
  const double scale1 = std::sqrt(2.0) * std::pow(kPi, 1.5) * atom.r1 * a_sq / T;
  finish(r, scale1, kPi * kPi * atom.r1 * atom.r2 * a_sq,
         std::sqrt(kPi / 2.0) * atom.r2 * T * f_sq / envelope);
  return r;
}

TransitionResult closed_form_rectangular(const ThreeLevelAtom& atom, double T, double tau,
                                         double delta) {
  atom.validate();
  require_positive(T, "T");
  require_positive(tau, "tau");
  const double xi = delta * tau;
  const double a_sq = std::sqrt(2.0 / (kPi * kPi * kPi)) * tau * T;
  const double half_sq = std::pow(sinc(0.5 * xi), 2);
  const double full_sq = std::pow(sinc(xi), 2);

  TransitionResult r;
  r.delta = delta;
  r.P2 = kPi * kPi * atom.r1 * atom.r2 * a_sq * half_sq;
  r.P1 = std::sqrt(2.0) * std::pow(kPi, 1.5) * atom.r1 * a_sq * full_sq / T;
  regime_flags(r.flags, T, tau);
  const double scale1 = std::sqrt(2.0) * std::pow(kPi, 1.5) * atom.r1 * a_sq / T;
  finish(r, scale1, kPi * kPi * atom.r1 * atom.r2 * a_sq,
         std::sqrt(kPi / 2.0) * atom.r2 * T * half_sq / full_sq);
  return r;
}

TransitionResult closed_form(PairFamily family, const ThreeLevelAtom& atom, double T, double tau,
                             double delta) {
  return family == PairFamily::gaussian ? closed_form_gaussian(atom, T, tau, delta)
                                        : closed_form_rectangular(atom, T, tau, delta);
}

Biphoton resonant_pair(PairFamily family, double T, double tau, const ThreeLevelAtom& atom,
                       double delta) {
  atom.validate();
  const double plus = atom.Omega_a + atom.Omega_b;
  const double minus = 0.5 * (atom.Omega_a - atom.Omega_b) - delta;
  const double w1 = 0.5 * plus + minus;
  const double w2 = 0.5 * plus - minus;
  return family == PairFamily::gaussian ? Biphoton::gaussian(T, tau, w1, w2)
                                        : Biphoton::rectangular(T, tau, w1, w2);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw AccuracyError("log-log fit needs at least two paired points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw AccuracyError("log-log fit needs positive values");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx < 1e-12 * n)
    throw AccuracyError("log-log fit is ill-conditioned (abscissae nearly coincide)");
  return sxy / sxx;
}

ScalingExponents scaling_law_check(PairFamily family, const ScalingScan& scan,
                                   const ThreeLevelAtom& atom) {
  atom.validate();
  auto p2 = [&](double T, double tau, double delta) {
    if (std::abs(delta * tau) < 2.0)
      throw DomainError("scaling_law_check: point with Delta tau < 2 is outside the "
                        "asymptotic regime");
    if (scan.path == SpectralPath::closed_form)
      return closed_form(family, atom, T, tau, delta).P2;
    return p2_pair(resonant_pair(family, T, tau, atom, delta), atom, scan.path).value;
  };
  auto snap = [&](double xi) { return family == PairFamily::rectangular ? snap_to_peak(xi) : xi; };
  auto dedupe = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::abs(b); }),
            v.end());
    return v;
  };

  ScalingExponents out;
  {
    const double xi = snap(scan.T_fixed_delta_tau);
    std::vector<double> ys;
    for (double T : scan.T_values)
      ys.push_back(p2(T, scan.T_fixed_tau, xi / scan.T_fixed_tau));
    out.T = log_log_slope(scan.T_values, ys);
  }
  {
    std::vector<double> taus;
    for (double tau : scan.tau_values)
      taus.push_back(snap(scan.tau_fixed_delta * tau) / scan.tau_fixed_delta);
    taus = dedupe(taus);
    std::vector<double> ys;
    for (double tau : taus)
      ys.push_back(p2(scan.tau_fixed_T, tau, scan.tau_fixed_delta));
    out.tau = log_log_slope(taus, ys);
  }
  {
    std::vector<double> deltas;
    for (double xi : scan.delta_tau_values)
      deltas.push_back(snap(xi) / scan.delta_fixed_tau);
    deltas = dedupe(deltas);
    std::vector<double> ys;
    for (double d : deltas)
      ys.push_back(p2(scan.delta_fixed_T, scan.delta_fixed_tau, d));
    out.delta = log_log_slope(deltas, ys);
  }
  return out;
}

TransparencyPoints transparency_points(double delta, int n_max) {
  if (delta == 0.0 || !std::isfinite(delta))
    throw DomainError("transparency_points: Delta must be finite and nonzero");
  if (n_max < 1)
    throw DomainError("transparency_points: n_max must be at least 1");
  const double d = std::abs(delta);
  const ThreeLevelAtom unit{1.0, 1.0, 1.0, 1.0};

  TransparencyPoints out;
  for (int n = 1; n <= n_max; ++n) {
    const double tau = 2.0 * kPi * n / d;
    const double p2 = closed_form_rectangular(unit, 1.0, tau, delta).P2;
    if (!(std::abs(p2) < 1e-12))
      throw AccuracyError("transparency point tau = " + std::to_string(tau) +
                          " leaves P2 = " + std::to_string(p2));
    out.two_photon_zeros.push_back(tau);
  }
  for (int n = 0; n < n_max; ++n) {
    const double tau = kPi * (2 * n + 1) / d;
    const double p1 = closed_form_rectangular(unit, 1.0, tau, delta).P1;
    if (!(std::abs(p1) < 1e-12))
      throw AccuracyError("suppression point tau = " + std::to_string(tau) +
                          " leaves P1 = " + std::to_string(p1));
    out.one_photon_zeros_with_p2_max.push_back(tau);
  }
  return out;
}

} // namespace tpa
