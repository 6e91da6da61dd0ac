#include "tpa/wavefunctions.hpp"

#include "tpa/errors.hpp"
#include "tpa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tpa {

namespace {

using std::numbers::pi;

// Gaussian factors are cut where the amplitude drops below e^-39 ~ 1e-17.
constexpr double kLogCut = 39.0;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError(std::string(what) + " must be positive and finite");
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x))
    throw DomainError(std::string(what) + " must be finite");
}

double window(double v, double tau) {
  const double a = std::abs(v);
  if (a < tau)
    return 1.0;
  if (a == tau)
    return 0.5;
  return 0.0;
}

cplx carrier(double t1, double t2, double w1, double w2) {
  return std::polar(1.0, -(w1 * t1 + w2 * t2));
}

double linear_weight(const GridAxis& axis, double x, std::size_t& i0) {
  // Returns the weight of node i0 + 1; i0 is the left node.
  const double s = (x - axis.first) / axis.step;
  if (s <= 0.0) {
    i0 = 0;
    return 0.0;
  }
  const double last = static_cast<double>(axis.count - 1);
  if (s >= last) {
    i0 = axis.count - 1;
    return 0.0;
  }
  i0 = static_cast<std::size_t>(s);
  return s - static_cast<double>(i0);
}

} // namespace

// --- OnePhotonEnvelope -------------------------------------------------------

OnePhotonEnvelope OnePhotonEnvelope::gaussian(double center, double width) {
  require_finite(center, "envelope center");
  require_positive(width, "envelope width");
  OnePhotonEnvelope e;
  e.shape_ = Shape::gaussian;
  e.center_ = center;
  e.width_ = width;
  return e;
}

OnePhotonEnvelope OnePhotonEnvelope::sampled(double center, double t_first, double dt,
                                             std::vector<cplx> samples) {
  require_finite(center, "envelope center");
  require_finite(t_first, "envelope start time");
  require_positive(dt, "envelope sample spacing");
  if (samples.size() < 2)
    throw DomainError("sampled envelope needs at least two samples");
  OnePhotonEnvelope e;
  e.shape_ = Shape::sampled;
  e.center_ = center;
  e.axis_ = GridAxis{t_first, dt, samples.size()};
  e.samples_ = std::move(samples);
  const double n = e.norm();
  if (std::abs(n - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "sampled envelope norm " << n << " differs from 1 by more than 1e-6";
    throw DomainError(msg.str());
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < e.samples_.size(); ++i)
    mean += dt * std::norm(e.samples_[i]) * e.axis_.node(i);
  double var = 0.0;
  for (std::size_t i = 0; i < e.samples_.size(); ++i) {
    const double d = e.axis_.node(i) - mean;
    var += dt * std::norm(e.samples_[i]) * d * d;
  }
  e.width_ = 0.5 / std::sqrt(std::max(var, dt * dt / 12.0));
  return e;
}

cplx OnePhotonEnvelope::envelope(double t) const {
  if (shape_ == Shape::gaussian) {
    const double w = width_;
    return std::pow(2.0 * pi * w * w, -0.25) * std::sqrt(2.0) * w * std::exp(-w * w * t * t);
  }
  if (t < axis_.lo() || t > axis_.hi())
    return 0.0;
  std::size_t i0 = 0;
  const double f = linear_weight(axis_, t, i0);
  if (f == 0.0)
    return samples_[i0];
  return (1.0 - f) * samples_[i0] + f * samples_[i0 + 1];
}

cplx OnePhotonEnvelope::eval_time(double t) const {
  return envelope(t) * std::polar(1.0, -center_ * t);
}

cplx OnePhotonEnvelope::spectrum(double omega) const {
  const double d = omega - center_;
  if (shape_ == Shape::gaussian) {
    const double w = width_;
    return std::pow(2.0 * pi * w * w, -0.25) * std::exp(-d * d / (4.0 * w * w));
  }
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < samples_.size(); ++i)
    sum += samples_[i] * std::polar(1.0, d * axis_.node(i));
  return sum * axis_.step / std::sqrt(2.0 * pi);
}

std::pair<double, double> OnePhotonEnvelope::time_support() const {
  if (shape_ == Shape::gaussian) {
    const double half = std::sqrt(kLogCut) / width_;
    return {-half, half};
  }
  return {axis_.lo(), axis_.hi()};
}

double OnePhotonEnvelope::norm() const {
  if (shape_ == Shape::gaussian)
    return 1.0;
  double sum = 0.0;
  for (const auto& s : samples_)
    sum += std::norm(s);
  return sum * axis_.step;
}

OnePhotonEnvelope OnePhotonEnvelope::with_center(double center) const {
  require_finite(center, "envelope center");
  OnePhotonEnvelope e = *this;
  e.center_ = center;
  return e;
}

// --- SampledGrid -------------------------------------------------------------

SampledGrid::SampledGrid(GridAxis u, GridAxis v, std::vector<cplx> samples)
    : u_(u), v_(v), samples_(std::move(samples)) {
  if (u_.count < 2 || v_.count < 2)
    throw DomainError("sampled grid needs at least two nodes per axis");
  require_positive(u_.step, "grid u spacing");
  require_positive(v_.step, "grid v spacing");
  require_finite(u_.first, "grid u origin");
  require_finite(v_.first, "grid v origin");
  if (samples_.size() != u_.count * v_.count)
    throw DomainError("sampled grid: sample count does not match the axes");
}

cplx SampledGrid::interpolate(double u, double v) const {
  if (u < u_.lo() || u > u_.hi() || v < v_.lo() || v > v_.hi())
    return 0.0;
  std::size_t iu = 0;
  std::size_t iv = 0;
  const double fu = linear_weight(u_, u, iu);
  const double fv = linear_weight(v_, v, iv);
  const cplx a = at(iu, iv);
  const cplx b = fv > 0.0 ? at(iu, iv + 1) : a;
  const cplx lower = (1.0 - fv) * a + fv * b;
  if (fu == 0.0)
    return lower;
  const cplx c = at(iu + 1, iv);
  const cplx d = fv > 0.0 ? at(iu + 1, iv + 1) : c;
  return (1.0 - fu) * lower + fu * ((1.0 - fv) * c + fv * d);
}

void SampledGrid::rescale(double factor) {
  for (auto& s : samples_)
    s *= factor;
}

double SampledGrid::norm() const {
  double sum = 0.0;
  for (const auto& s : samples_)
    sum += std::norm(s);
  return 0.5 * sum * u_.step * v_.step;
}

// --- Biphoton ----------------------------------------------------------------

std::string to_string(BiphotonKind kind) {
  switch (kind) {
  case BiphotonKind::gaussian:
    return "gaussian";
  case BiphotonKind::rectangular:
    return "rectangular";
  case BiphotonKind::separable_product:
    return "separable";
  case BiphotonKind::sampled_grid:
    return "sampled";
  }
  return "unknown";
}

Biphoton::Biphoton(Shape shape, double T, double tau, double omega1_bar, double omega2_bar)
    : shape_(std::move(shape)), T_(T), tau_(tau), omega1_bar_(omega1_bar),
      omega2_bar_(omega2_bar) {
  require_positive(T_, "coherence time T");
  require_positive(tau_, "correlation time tau");
  require_finite(omega1_bar_, "omega1_bar");
  require_finite(omega2_bar_, "omega2_bar");
}

Biphoton Biphoton::gaussian(double T, double tau, double omega1_bar, double omega2_bar) {
  return Biphoton(Gaussian{}, T, tau, omega1_bar, omega2_bar);
}

Biphoton Biphoton::rectangular(double T, double tau, double omega1_bar, double omega2_bar) {
  return Biphoton(Rectangular{}, T, tau, omega1_bar, omega2_bar);
}

Biphoton Biphoton::separable(OnePhotonEnvelope photon1, OnePhotonEnvelope photon2) {
  // No correlation: both nominal times are the longer photon duration.
  const double duration = 0.5 / std::min(photon1.width(), photon2.width());
  const double w1 = photon1.center();
  const double w2 = photon2.center();
  return Biphoton(Separable{std::move(photon1), std::move(photon2)}, duration, duration, w1,
                  w2);
}

Biphoton Biphoton::sampled(SampledGrid grid, double T, double tau, double omega1_bar,
                           double omega2_bar) {
  return Biphoton(std::move(grid), T, tau, omega1_bar, omega2_bar);
}

BiphotonKind Biphoton::kind() const {
  switch (shape_.index()) {
  case 0:
    return BiphotonKind::gaussian;
  case 1:
    return BiphotonKind::rectangular;
  case 2:
    return BiphotonKind::separable_product;
  default:
    return BiphotonKind::sampled_grid;
  }
}

Biphoton Biphoton::with_carriers(double omega1_bar, double omega2_bar) const {
  Biphoton b = *this;
  require_finite(omega1_bar, "omega1_bar");
  require_finite(omega2_bar, "omega2_bar");
  b.omega1_bar_ = omega1_bar;
  b.omega2_bar_ = omega2_bar;
  if (auto* sep = std::get_if<Separable>(&b.shape_)) {
    sep->photon1 = sep->photon1.with_center(omega1_bar);
    sep->photon2 = sep->photon2.with_center(omega2_bar);
  }
  return b;
}

Biphoton Biphoton::scaled(double factor) const {
  const auto* g = grid();
  if (g == nullptr)
    throw UsageError("only sampled biphotons can be rescaled");
  require_finite(factor, "scale factor");
  Biphoton b = *this;
  std::get<SampledGrid>(b.shape_).rescale(factor);
  return b;
}

double Biphoton::gaussian_amplitude(double T, double tau) {
  return 1.0 / std::sqrt(2.0 * pi * tau * T);
}

double Biphoton::rectangular_amplitude(double T, double tau) {
  return std::pow(8.0 * pi, -0.25) / std::sqrt(tau * T);
}

cplx Biphoton::envelope(double u, double v) const {
  const double T = T_;
  const double tau = tau_;
  switch (shape_.index()) {
  case 0:
    return gaussian_amplitude(T, tau) * std::exp(-u * u / (16.0 * T * T) - v * v / (4.0 * tau * tau));
  case 1: {
    const double w = window(v, tau);
    if (w == 0.0)
      return 0.0;
    return w * rectangular_amplitude(T, tau) * std::exp(-u * u / (16.0 * T * T));
  }
  case 2: {
    const auto& sep = std::get<Separable>(shape_);
    return sep.photon1.envelope(0.5 * (u + v)) * sep.photon2.envelope(0.5 * (u - v));
  }
  default:
    return std::get<SampledGrid>(shape_).interpolate(u, v);
  }
}

cplx Biphoton::eval_time(double t1, double t2) const {
  return envelope(t1 + t2, t1 - t2) * carrier(t1, t2, omega1_bar_, omega2_bar_);
}

UvSupport Biphoton::support() const {
  const double u_half = 4.0 * T_ * std::sqrt(kLogCut);
  switch (shape_.index()) {
  case 0: {
    const double v_half = 2.0 * tau_ * std::sqrt(kLogCut);
    return {-u_half, u_half, {-v_half, v_half}};
  }
  case 1:
    return {-u_half, u_half, {-tau_, tau_}};
  case 2: {
    const auto& sep = std::get<Separable>(shape_);
    const auto [a1, b1] = sep.photon1.time_support();
    const auto [a2, b2] = sep.photon2.time_support();
    return {a1 + a2, b1 + b2, {a1 - b2, b1 - a2}};
  }
  default: {
    const auto& g = std::get<SampledGrid>(shape_);
    return {g.u_axis().lo(), g.u_axis().hi(), {g.v_axis().lo(), g.v_axis().hi()}};
  }
  }
}

const OnePhotonEnvelope* Biphoton::photon(int index) const {
  const auto* sep = std::get_if<Separable>(&shape_);
  if (sep == nullptr)
    return nullptr;
  return index == 1 ? &sep->photon1 : &sep->photon2;
}

std::pair<double, double> natural_panel_widths(const Biphoton& b) {
  switch (b.kind()) {
  case BiphotonKind::gaussian:
    return {b.coherence_time(), b.correlation_time()};
  case BiphotonKind::rectangular:
    return {b.coherence_time(), 0.5 * b.correlation_time()};
  case BiphotonKind::separable_product: {
    const double w = std::max(b.photon(1)->width(), b.photon(2)->width());
    return {0.5 / w, 0.5 / w};
  }
  case BiphotonKind::sampled_grid:
    return {b.grid()->u_axis().step, b.grid()->v_axis().step};
  }
  return {b.coherence_time(), b.correlation_time()};
}

// --- normalization -----------------------------------------------------------

namespace {

double uv_norm(const Biphoton& b, int refinement) {
  const auto sup = b.support();
  const auto [pu, pv] = natural_panel_widths(b);
  const auto u_axis = quad::composite_axis(sup.u_lo, sup.u_hi, pu, 16, refinement);
  const auto v_axis = quad::composite_axis(sup.v_breaks, pv, 16, refinement);
  double sum = 0.0;
  for (std::size_t i = 0; i < u_axis.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < v_axis.size(); ++j)
      row += v_axis.weights[j] * std::norm(b.envelope(u_axis.nodes[i], v_axis.nodes[j]));
    sum += u_axis.weights[i] * row;
  }
  return 0.5 * sum;
}

} // namespace

NormalizationReport normalization_check(const Biphoton& b) {
  double norm = 0.0;
  if (const auto* g = b.grid()) {
    norm = g->norm();
  } else {
    double previous = uv_norm(b, 0);
    bool converged = false;
    for (int level = 1; level <= 4; ++level) {
      norm = uv_norm(b, level);
      if (std::abs(norm - previous) <= 1e-12 * std::max(1.0, norm)) {
        converged = true;
        break;
      }
      previous = norm;
    }
    if (!converged)
      throw AccuracyError("normalization_check: quadrature did not converge");
  }
  NormalizationReport r;
  r.norm = norm;
  r.residual = std::abs(norm - 1.0);
  r.flagged = r.residual > 1e-6;
  return r;
}

// --- sampling ----------------------------------------------------------------

Biphoton make_sampled(const Biphoton& b, const SamplingSpec& spec) {
  if (spec.nu < 2 || spec.nv < 2)
    throw DomainError("make_sampled: need at least two nodes per axis");
  if (spec.nu > spec.max_samples / spec.nv)
    throw ResourceError("make_sampled: " + std::to_string(spec.nu) + " x " +
                        std::to_string(spec.nv) + " samples exceed the cap of " +
                        std::to_string(spec.max_samples));

  const auto sup = b.support();
  double u_lo = sup.u_lo;
  double u_hi = sup.u_hi;
  double v_lo = sup.v_breaks.front();
  double v_hi = sup.v_breaks.back();
  if (b.kind() == BiphotonKind::gaussian || b.kind() == BiphotonKind::rectangular) {
    const double uh = spec.u_half_extent > 0.0 ? spec.u_half_extent : 25.0 * b.coherence_time();
    u_lo = -uh;
    u_hi = uh;
    if (b.kind() == BiphotonKind::gaussian) {
      const double vh =
          spec.v_half_extent > 0.0 ? spec.v_half_extent : 12.5 * b.correlation_time();
      v_lo = -vh;
      v_hi = vh;
    }
  } else {
    if (spec.u_half_extent > 0.0) {
      u_lo = -spec.u_half_extent;
      u_hi = spec.u_half_extent;
    }
    if (spec.v_half_extent > 0.0) {
      v_lo = -spec.v_half_extent;
      v_hi = spec.v_half_extent;
    }
  }

  const double du = (u_hi - u_lo) / static_cast<double>(spec.nu);
  const double dv = (v_hi - v_lo) / static_cast<double>(spec.nv);
  const GridAxis ua{u_lo + 0.5 * du, du, spec.nu};
  const GridAxis va{v_lo + 0.5 * dv, dv, spec.nv};
  std::vector<cplx> samples(spec.nu * spec.nv);
  for (std::size_t i = 0; i < spec.nu; ++i)
    for (std::size_t j = 0; j < spec.nv; ++j)
      samples[i * spec.nv + j] = b.envelope(ua.node(i), va.node(j));

  SampledGrid grid(ua, va, std::move(samples));
  const double raw = grid.norm();
  if (!(raw > 0.0))
    throw DomainError("make_sampled: the grid misses the wavefunction entirely");
  grid.rescale(1.0 / std::sqrt(raw));
  grid.truncation_error = std::abs(1.0 - raw);
  if (grid.truncation_error > 1e-6) {
    std::ostringstream msg;
    msg << "grid truncation: sampled norm before renormalization was " << raw
        << " (missing " << grid.truncation_error << ")";
    grid.warnings.push_back(msg.str());
  }
  return Biphoton::sampled(std::move(grid), b.coherence_time(), b.correlation_time(),
                           b.omega1_bar(), b.omega2_bar());
}

} // namespace tpa
