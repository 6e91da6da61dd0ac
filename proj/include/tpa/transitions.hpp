#pragma once

#include "tpa/spectral.hpp"
#include "tpa/wavefunctions.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tpa {

struct ThreeLevelAtom {
  double Omega_a = 0.0; // g -> a
  double Omega_b = 0.0; // a -> b
  double r1 = 1.0;      // lower coupling
  double r2 = 1.0;      // upper coupling

  /// Throws DomainError unless all four are positive and finite.
  void validate() const;
};

struct TwoLevelAtom {
  double Omega = 0.0;
  double r = 1.0;

  void validate() const;
};

enum class Flag : unsigned {
  perturbative_bound_exceeded = 1u << 0, // P > 0.1
  two_photon_resonance_off = 1u << 1,    // |w+bar - (Omega_a + Omega_b)| T > 3
  T_over_tau_small = 1u << 2,            // T / tau < 10
  tau_not_below_T = 1u << 3,
  one_photon_suppressed = 1u << 4,       // P1 numerically zero
  two_photon_transparent = 1u << 5,      // P2 numerically zero
  ratio_undefined = 1u << 6,
  evaluation_failed = 1u << 7,
};

class Flags {
public:
  Flags() = default;

  void set(Flag f) { bits_ |= static_cast<unsigned>(f); }
  bool has(Flag f) const { return (bits_ & static_cast<unsigned>(f)) != 0; }
  bool empty() const { return bits_ == 0; }
  unsigned bits() const { return bits_; }
  Flags& operator|=(Flags other) {
    bits_ |= other.bits_;
    return *this;
  }

  /// Names in declaration order, e.g. {"T_over_tau_small", "one_photon_suppressed"}.
  std::vector<std::string> names() const;
  /// names() joined with '|', empty string when no flag is set.
  std::string joined() const;

private:
  unsigned bits_ = 0;
};

std::string to_string(Flag f);

struct Probability {
  double value = 0.0;
  Flags flags;
};

struct TransitionResult {
  double P1 = 0.0;
  double P2 = 0.0;
  std::optional<double> ratio; // empty when P1 is numerically zero
  double delta = 0.0;          // (Omega_a - Omega_b)/2 - w-bar
  Flags flags;
};

/// Delta = (Omega_a - Omega_b)/2 - w-bar.
double detuning(const Biphoton& b, const ThreeLevelAtom& atom);

/// P1 = 2 pi r |Psi(Omega)|^2 for a single photon.
Probability p1_single_photon(const OnePhotonEnvelope& env, const TwoLevelAtom& atom);

/// P2 = 4 pi^2 r1 r2 |Psi~(Omega_a, Omega_b)|^2.
Probability p2_pair(const Biphoton& b, const ThreeLevelAtom& atom,
                    SpectralPath path = SpectralPath::closed_form,
                    const QuadratureSettings& settings = {});

enum class P1Method {
  /// Separable: exact 2 pi r1 |Psi1(Omega_a)|^2. Gaussian and rectangular:
  /// the T >> tau limit in which exp(-2 dw^2 T^2) acts as a delta function,
  /// P1 = sqrt(2) pi^{3/2} r1 A^2 g((Omega_a - w1bar) tau) / T with
  /// g = exp(-2x^2) or sinc^2(x).
  closed_form,
  /// Exact 2 pi r1 integral |Psi(Omega_a, w2)|^2 dw2 by time-domain Parseval.
  quadrature,
};

Probability p1_pair(const Biphoton& b, const ThreeLevelAtom& atom,
                    P1Method method = P1Method::closed_form,
                    const QuadratureSettings& settings = {});

/// P1 and P2 from one biphoton. closed_form uses the closed-form P2 and P1;
/// the other paths pair the requested P2 route with quadrature P1.
TransitionResult evaluate_pair(const Biphoton& b, const ThreeLevelAtom& atom,
                               SpectralPath path = SpectralPath::closed_form,
                               const QuadratureSettings& settings = {});

enum class PairFamily { gaussian, rectangular };

std::string to_string(PairFamily family);
PairFamily parse_pair_family(const std::string& text);

/// Resonant-pair formulas (w+bar = Omega_a + Omega_b) in terms of Delta.
/// The ratio is evaluated from its own expression, not as P2 / P1.
TransitionResult closed_form_gaussian(const ThreeLevelAtom& atom, double T, double tau,
                                      double delta);
TransitionResult closed_form_rectangular(const ThreeLevelAtom& atom, double T, double tau,
                                         double delta);
TransitionResult closed_form(PairFamily family, const ThreeLevelAtom& atom, double T, double tau,
                             double delta);

/// A biphoton with w+bar = Omega_a + Omega_b and the given Delta.
Biphoton resonant_pair(PairFamily family, double T, double tau, const ThreeLevelAtom& atom,
                       double delta);

struct ScalingScan {
  std::vector<double> T_values{1.0, 1.77827941, 3.16227766, 5.62341325, 10.0};
  double T_fixed_tau = 0.01;
  double T_fixed_delta_tau = 10.0;

  std::vector<double> tau_values{0.001, 0.00177827941, 0.00316227766, 0.00562341325, 0.01};
  double tau_fixed_T = 1.0;
  double tau_fixed_delta = 5000.0;

  std::vector<double> delta_tau_values{5.0, 8.0, 12.0, 18.0, 27.0, 35.0, 50.0};
  double delta_fixed_T = 1.0;
  double delta_fixed_tau = 0.01;

  SpectralPath path = SpectralPath::closed_form;
};

struct ScalingExponents {
  double T = 0.0;
  double tau = 0.0;
  double delta = 0.0;
};

/// Log-log least-squares exponents of P2 in T, tau and Delta, varied one at a
/// time. Rectangular points snap to the nearest envelope peak
/// Delta tau = (2k + 1) pi. Throws DomainError for points with Delta tau < 2
/// and AccuracyError for degenerate regressions.
ScalingExponents scaling_law_check(PairFamily family, const ScalingScan& scan,
                                   const ThreeLevelAtom& atom);

/// Slope of the least-squares line through (log x, log y).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct TransparencyPoints {
  std::vector<double> two_photon_zeros;             // tau = 2 pi n / |Delta|, n = 1..n_max
  std::vector<double> one_photon_zeros_with_p2_max; // tau = pi (2n + 1) / |Delta|, n = 0..n_max-1
};

/// Throws DomainError for Delta = 0 or n_max < 1, and AccuracyError if a
/// located point fails its closed-form check (|P| < 1e-12 at T = 1, r = 1).
TransparencyPoints transparency_points(double delta, int n_max);

} // namespace tpa
