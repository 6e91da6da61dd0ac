#pragma once

#include "tpa/specfun.hpp"
#include "tpa/wavefunctions.hpp"

#include <string>

namespace tpa {

/// How a spectrum is evaluated.
///  - closed_form: analytic expressions (Gaussian, rectangular; separable for Psi only)
///  - time_domain_quadrature: transform psi (times theta(t2 - t1) when time-ordered)
///    directly with Gauss-Legendre panels in (u, v), or a midpoint sum on sampled grids
///  - kernel_convolution: convolve the closed-form Psi with the Heaviside spectral kernel
enum class SpectralPath { closed_form, time_domain_quadrature, kernel_convolution };

std::string to_string(SpectralPath path);
/// Accepts "closed-form", "quadrature" / "time-domain-quadrature", "kernel" / "kernel-convolution".
SpectralPath parse_spectral_path(const std::string& text);

struct QuadratureSettings {
  int order = 16;
  double abs_tol = 1e-10; // on amplitudes
  double rel_tol = 1e-10;
  int max_refinements = 6;
};

/// Psi(w1, w2) = (1/2pi) double integral e^{i w1 t1} e^{i w2 t2} psi(t1, t2).
///
/// Gaussian:    A1 exp(-(w+ - w+bar)^2 T^2) exp(-(w- - w-bar)^2 tau^2),  A1 = sqrt(2 tau T / pi)
/// Rectangular: A2 exp(-(w+ - w+bar)^2 T^2) sinc((w- - w-bar) tau),       A2 = (2/pi^3)^{1/4} sqrt(tau T)
/// with w+ = w1 + w2 and w- = (w1 - w2)/2.
cplx joint_spectrum(const Biphoton& b, double w1, double w2,
                    SpectralPath path = SpectralPath::closed_form,
                    const QuadratureSettings& settings = {});

/// Transform of psi(t1, t2) theta(t2 - t1). theta(0) counts as 1/2.
///
/// With xi = (w- - w-bar) tau, the time ordering keeps v = t1 - t2 < 0 and gives
///   Gaussian:    (A1/2) exp(-(w+ - w+bar)^2 T^2) conj(F(xi))
///   Rectangular: (A2/2) exp(-(w+ - w+bar)^2 T^2) sinc(xi/2) exp(-i xi/2)
/// |Psi~|^2 is even in xi either way.
///
/// Throws UsageError when the path is unavailable for the kind and
/// AccuracyError when quadrature does not converge.
cplx time_ordered_spectrum(const Biphoton& b, double w1, double w2,
                           SpectralPath path = SpectralPath::closed_form,
                           const QuadratureSettings& settings = {});

/// A1 = sqrt(2 tau T / pi), the peak of the Gaussian |Psi|.
double gaussian_spectral_amplitude(double T, double tau);
/// A2 = (2/pi^3)^{1/4} sqrt(tau T), the peak of the rectangular |Psi|.
double rectangular_spectral_amplitude(double T, double tau);

bool has_closed_form_joint(const Biphoton& b);
bool has_closed_form_time_ordered(const Biphoton& b);

enum class MarginalRoute {
  automatic,   // spectral
  spectral,    // integrate |Psi(w1, w2)|^2 over w2
  time_domain, // Parseval in t2: integral |h(t2)|^2, h(t2) = (2pi)^{-1/2} integral e^{i w1 t1} psi dt1
};

/// integral dw2 |Psi(w1, w2)|^2: the spectral density of photon 1 with photon 2 traced out.
double one_photon_marginal_spectrum(const Biphoton& b, double w1,
                                    MarginalRoute route = MarginalRoute::automatic,
                                    const QuadratureSettings& settings = {});

/// double integral |Psi|^2 dw1 dw2. Rectangular spectra decay as 1/w-^2; their
/// tail beyond the window is extrapolated from that decay. Sampled grids use
/// the discrete transform on the reciprocal grid.
double plancherel_norm(const Biphoton& b, const QuadratureSettings& settings = {});

/// Default Heaviside-kernel grid used by the kernel_convolution path at (w1, w2).
KernelGrid default_kernel_grid(const Biphoton& b, double w1, double w2);

/// A biphoton bundled with an evaluation route.
class JointSpectrum {
public:
  explicit JointSpectrum(Biphoton source, SpectralPath path = SpectralPath::closed_form,
                         QuadratureSettings settings = {})
      : source_(std::move(source)), path_(path), settings_(settings) {}

  const Biphoton& source() const { return source_; }
  SpectralPath path() const { return path_; }
  const QuadratureSettings& settings() const { return settings_; }

  cplx amplitude(double w1, double w2) const;
  cplx time_ordered(double w1, double w2) const {
    return time_ordered_spectrum(source_, w1, w2, path_, settings_);
  }
  double marginal(double w1) const {
    return one_photon_marginal_spectrum(source_, w1, MarginalRoute::automatic, settings_);
  }
  double norm() const { return plancherel_norm(source_, settings_); }

private:
  Biphoton source_;
  SpectralPath path_;
  QuadratureSettings settings_;
};

} // namespace tpa
