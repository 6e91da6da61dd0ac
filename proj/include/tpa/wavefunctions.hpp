#pragma once

#include "tpa/specfun.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tpa {

// Units: every time is in one abstract unit and every frequency in its
// reciprocal. Rotated coordinates are u = t1 + t2 and v = t1 - t2, so
// dt1 dt2 = du dv / 2.

/// Uniform axis of cell-centred samples: node i sits at first + i * step and
/// represents the cell [node - step/2, node + step/2].
struct GridAxis {
  double first = 0.0;
  double step = 0.0;
  std::size_t count = 0;

  double node(std::size_t i) const { return first + static_cast<double>(i) * step; }
  double lo() const { return first - 0.5 * step; }
  double hi() const { return first + (static_cast<double>(count) - 0.5) * step; }
};

/// Time-domain support of a biphoton envelope in rotated coordinates.
/// `v_breaks` is sorted; its ends bound v and interior entries mark jumps.
struct UvSupport {
  double u_lo = 0.0;
  double u_hi = 0.0;
  std::vector<double> v_breaks;
};

/// Single-photon wavepacket psi(t) = envelope(t) exp(-i center t) with unit
/// norm, and its spectrum Psi(w) = (2 pi)^{-1/2} integral psi(t) e^{iwt} dt.
class OnePhotonEnvelope {
public:
  enum class Shape { gaussian, sampled };

  /// |Psi(w)|^2 is a normal density with standard deviation `width`.
  static OnePhotonEnvelope gaussian(double center, double width);

  /// Cell-centred samples of the envelope (carrier excluded), starting at
  /// t_first with spacing dt. The midpoint-rule norm must be 1 within 1e-6.
  static OnePhotonEnvelope sampled(double center, double t_first, double dt,
                                   std::vector<cplx> samples);

  Shape shape() const { return shape_; }
  double center() const { return center_; }
  /// Spectral width: the constructor argument for Gaussians, the
  /// transform-limited value 1/(2 sigma_t) for samples.
  double width() const { return width_; }

  cplx envelope(double t) const;
  cplx eval_time(double t) const;
  cplx spectrum(double omega) const;
  std::pair<double, double> time_support() const;
  double norm() const;

  OnePhotonEnvelope with_center(double center) const;

private:
  OnePhotonEnvelope() = default;

  Shape shape_ = Shape::gaussian;
  double center_ = 0.0;
  double width_ = 0.0;
  GridAxis axis_{};
  std::vector<cplx> samples_;
};

/// Envelope samples on a uniform (u, v) grid, row-major with v fastest.
class SampledGrid {
public:
  SampledGrid(GridAxis u, GridAxis v, std::vector<cplx> samples);

  const GridAxis& u_axis() const { return u_; }
  const GridAxis& v_axis() const { return v_; }
  std::span<const cplx> samples() const { return samples_; }
  cplx at(std::size_t iu, std::size_t iv) const { return samples_[iu * v_.count + iv]; }

  /// Bilinear between node centres, held constant out to the cell edge,
  /// zero beyond the grid.
  cplx interpolate(double u, double v) const;

  /// Midpoint-rule value of the double integral of |psi|^2 dt1 dt2.
  double norm() const;

  void rescale(double factor);

  /// Norm missing from the sampled region when the grid was made from an
  /// analytic wavefunction (0 when unknown).
  double truncation_error = 0.0;
  std::vector<std::string> warnings;

private:
  GridAxis u_;
  GridAxis v_;
  std::vector<cplx> samples_;
};

enum class BiphotonKind { gaussian, rectangular, separable_product, sampled_grid };

std::string to_string(BiphotonKind kind);

/// Two-photon wavefunction psi(t1, t2) = envelope(u, v) exp(-i w1bar t1) exp(-i w2bar t2).
///
/// Gaussian:    a1 exp(-u^2 / 16T^2) exp(-v^2 / 4tau^2),  a1 = 1/sqrt(2 pi tau T)
/// Rectangular: a2 exp(-u^2 / 16T^2) Pi_tau(v),           a2 = (8 pi)^{-1/4} / sqrt(tau T)
///
/// Pi_tau(v) is 1 inside |v| < tau, 0 outside, and 1/2 on the boundary.
/// Values are immutable after construction.
class Biphoton {
public:
  static Biphoton gaussian(double T, double tau, double omega1_bar, double omega2_bar);
  static Biphoton rectangular(double T, double tau, double omega1_bar, double omega2_bar);
  static Biphoton separable(OnePhotonEnvelope photon1, OnePhotonEnvelope photon2);
  /// T and tau are descriptive metadata for sampled grids; they set quadrature
  /// windows and regime flags.
  static Biphoton sampled(SampledGrid grid, double T, double tau, double omega1_bar,
                          double omega2_bar);

  BiphotonKind kind() const;
  double coherence_time() const { return T_; }
  double correlation_time() const { return tau_; }
  double omega1_bar() const { return omega1_bar_; }
  double omega2_bar() const { return omega2_bar_; }
  double omega_plus_bar() const { return omega1_bar_ + omega2_bar_; }
  double omega_minus_bar() const { return 0.5 * (omega1_bar_ - omega2_bar_); }

  /// tau < T; the closed forms assume tau << T. Violations are flagged, not rejected.
  bool correlation_regime_ok() const { return tau_ < T_; }

  Biphoton with_carriers(double omega1_bar, double omega2_bar) const;
  /// Multiplies a sampled grid by `factor` (leaves it unnormalized).
  Biphoton scaled(double factor) const;

  cplx envelope(double u, double v) const;
  cplx eval_time(double t1, double t2) const;
  UvSupport support() const;

  const SampledGrid* grid() const { return std::get_if<SampledGrid>(&shape_); }
  const OnePhotonEnvelope* photon(int index) const;

  static double gaussian_amplitude(double T, double tau);
  static double rectangular_amplitude(double T, double tau);

private:
  struct Gaussian {};
  struct Rectangular {};
  struct Separable {
    OnePhotonEnvelope photon1;
    OnePhotonEnvelope photon2;
  };
  using Shape = std::variant<Gaussian, Rectangular, Separable, SampledGrid>;

  Biphoton(Shape shape, double T, double tau, double omega1_bar, double omega2_bar);

  Shape shape_;
  double T_;
  double tau_;
  double omega1_bar_;
  double omega2_bar_;
};

/// Panel widths (u, v) matched to the envelope's natural time scales.
std::pair<double, double> natural_panel_widths(const Biphoton& b);

struct NormalizationReport {
  double norm = 0.0;
  double residual = 0.0; // |norm - 1|
  bool flagged = false;  // residual > 1e-6
};

/// Double integral of |psi|^2 over (t1, t2) by Gauss-Legendre panels in (u, v)
/// with step-halving (midpoint sum for sampled grids).
/// Throws AccuracyError if the panels do not converge.
NormalizationReport normalization_check(const Biphoton& b);

struct SamplingSpec {
  std::size_t nu = 512;
  std::size_t nv = 512;
  double u_half_extent = 0.0; // 0: 25 T
  double v_half_extent = 0.0; // 0: 12.5 tau (Gaussian); rectangular grids always span [-tau, tau]
  std::size_t max_samples = std::size_t{1} << 24;
};

/// Samples the envelope on a cell-centred (u, v) grid and renormalizes to
/// unit norm. Records the norm lost to truncation and warns above 1e-6.
/// Throws ResourceError when nu * nv exceeds max_samples.
Biphoton make_sampled(const Biphoton& b, const SamplingSpec& spec = {});

/// JSON container for sampled grids; the layout is described in docs/formats.md.
void save_sampled(const Biphoton& b, const std::filesystem::path& path);
/// Loads and validates a sampled grid. Throws IoError on unreadable or
/// malformed files and DomainError when the norm is off by more than 1e-6.
Biphoton load_sampled(const std::filesystem::path& path);

} // namespace tpa
