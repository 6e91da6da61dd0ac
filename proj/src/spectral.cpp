#include "tpa/spectral.hpp"

#include "tpa/errors.hpp"
#include "tpa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace tpa {

namespace {

constexpr double kPi = std::numbers::pi;

// Half-width of the sinc-tail window (in units of 1/tau) for rectangular spectra.
constexpr double kSincWindow = 4000.0;
// Plancherel window; the tail beyond it is extrapolated.
constexpr double kPlancherelWindow = 1000.0;

void require_finite(double w1, double w2, const char* what) {
  if (!std::isfinite(w1) || !std::isfinite(w2))
    throw DomainError(std::string(what) + ": frequencies must be finite");
}

struct Detunings {
  double plus;  // w+ - w+bar
  double minus; // w- - w-bar
};

Detunings detunings(const Biphoton& b, double w1, double w2) {
  return {w1 + w2 - b.omega_plus_bar(), 0.5 * (w1 - w2) - b.omega_minus_bar()};
}

bool converged(cplx fine, cplx coarse, const QuadratureSettings& s) {
  return std::abs(fine - coarse) <= s.abs_tol + s.rel_tol * std::abs(fine);
}

std::vector<cplx> phase_weights(const quad::Axis& axis, double k) {
  std::vector<cplx> out(axis.size());
  for (std::size_t i = 0; i < axis.size(); ++i)
    out[i] = axis.weights[i] * std::polar(1.0, k * axis.nodes[i]);
  return out;
}

// (1/4pi) double integral env(u, v) e^{i(dp u/2 + dm v)} du dv over the support,
// restricted to v < 0 when `ordered`.
cplx uv_transform_level(const Biphoton& b, const Detunings& d, bool ordered, double pu,
                        double pv, int order, int refinement) {
  const auto sup = b.support();
  std::vector<double> vb = sup.v_breaks;
  if (ordered) {
    if (vb.front() >= 0.0)
      return {0.0, 0.0};
    const bool straddles = vb.back() > 0.0;
    std::erase_if(vb, [](double x) { return x >= 0.0; });
    if (straddles)
      vb.push_back(0.0);
  }
  const auto u_axis = quad::composite_axis(sup.u_lo, sup.u_hi, pu, order, refinement);
  const auto v_axis = quad::composite_axis(vb, pv, order, refinement);
  const auto wu = phase_weights(u_axis, 0.5 * d.plus);
  const auto wv = phase_weights(v_axis, d.minus);

  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < u_axis.size(); ++i) {
    cplx row{0.0, 0.0};
    for (std::size_t j = 0; j < v_axis.size(); ++j)
      row += wv[j] * b.envelope(u_axis.nodes[i], v_axis.nodes[j]);
    sum += wu[i] * row;
  }
  return sum / (4.0 * kPi);
}

cplx uv_transform_analytic(const Biphoton& b, double w1, double w2, bool ordered,
                           const QuadratureSettings& s) {
  const auto d = detunings(b, w1, w2);
  auto [pu, pv] = natural_panel_widths(b);
  // Keep the phase advance per panel below 2 radians.
  if (d.plus != 0.0)
    pu = std::min(pu, 4.0 / std::abs(d.plus));
  if (d.minus != 0.0)
    pv = std::min(pv, 2.0 / std::abs(d.minus));

  cplx coarse = uv_transform_level(b, d, ordered, pu, pv, s.order, 0);
  for (int level = 1; level <= s.max_refinements; ++level) {
    const cplx fine = uv_transform_level(b, d, ordered, pu, pv, s.order, level);
    if (converged(fine, coarse, s))
      return fine;
    coarse = fine;
  }
  throw AccuracyError("time-domain quadrature did not converge after " +
                      std::to_string(s.max_refinements) + " refinements");
}

// Midpoint sum over the grid cells; theta(0) = 1/2 for nodes on v = 0.
cplx uv_transform_sampled(const Biphoton& b, double w1, double w2, bool ordered) {
  const auto& g = *b.grid();
  const auto d = detunings(b, w1, w2);
  const auto& ua = g.u_axis();
  const auto& va = g.v_axis();

  std::vector<cplx> wv(va.count);
  for (std::size_t j = 0; j < va.count; ++j) {
    const double v = va.node(j);
    double weight = 1.0;
    if (ordered) {
      if (std::abs(v) <= 1e-9 * va.step)
        weight = 0.5;
      else if (v > 0.0)
        weight = 0.0;
    }
    wv[j] = weight * std::polar(1.0, d.minus * v);
  }
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < ua.count; ++i) {
    cplx row{0.0, 0.0};
    for (std::size_t j = 0; j < va.count; ++j)
      row += wv[j] * g.at(i, j);
    sum += std::polar(1.0, 0.5 * d.plus * ua.node(i)) * row;
  }
  return sum * (ua.step * va.step / (4.0 * kPi));
}

cplx uv_transform(const Biphoton& b, double w1, double w2, bool ordered,
                  const QuadratureSettings& s) {
  if (b.kind() == BiphotonKind::sampled_grid)
    return uv_transform_sampled(b, w1, w2, ordered);
  return uv_transform_analytic(b, w1, w2, ordered, s);
}

cplx closed_joint(const Biphoton& b, double w1, double w2) {
  const auto d = detunings(b, w1, w2);
  const double T = b.coherence_time();
  const double tau = b.correlation_time();
  switch (b.kind()) {
  case BiphotonKind::gaussian:
    return gaussian_spectral_amplitude(T, tau) * std::exp(-d.plus * d.plus * T * T) *
           std::exp(-d.minus * d.minus * tau * tau);
  case BiphotonKind::rectangular:
    return rectangular_spectral_amplitude(T, tau) * std::exp(-d.plus * d.plus * T * T) *
           sinc(d.minus * tau);
  case BiphotonKind::separable_product:
    return b.photon(1)->spectrum(w1) * b.photon(2)->spectrum(w2);
  case BiphotonKind::sampled_grid:
    break;
  }
  throw UsageError("no closed form for a sampled-grid biphoton");
}

cplx closed_time_ordered(const Biphoton& b, double w1, double w2) {
  const auto d = detunings(b, w1, w2);
  const double T = b.coherence_time();
  const double tau = b.correlation_time();
  const double xi = d.minus * tau;
  const double sum_factor = std::exp(-d.plus * d.plus * T * T);
  switch (b.kind()) {
  case BiphotonKind::gaussian:
    return 0.5 * gaussian_spectral_amplitude(T, tau) * sum_factor *
           std::conj(plasma_dispersion(xi));
  case BiphotonKind::rectangular:
    return 0.5 * rectangular_spectral_amplitude(T, tau) * sum_factor * sinc(0.5 * xi) *
           std::polar(1.0, -0.5 * xi);
  default:
    break;
  }
  throw UsageError("no closed-form time-ordered spectrum for " + to_string(b.kind()) +
                   " biphotons");
}

cplx kernel_time_ordered(const Biphoton& b, double w1, double w2) {
  if (!has_closed_form_joint(b))
    throw UsageError("kernel-convolution path needs a closed-form joint spectrum; " +
                     to_string(b.kind()) + " has none");
  const double half_plus = 0.5 * (w1 + w2);
  auto f = [&](double x) { return closed_joint(b, half_plus + x, half_plus - x); };
  return heaviside_kernel_apply(f, 0.5 * (w1 - w2), default_kernel_grid(b, w1, w2));
}

// --- marginal ----------------------------------------------------------------

double marginal_spectral(const Biphoton& b, double w1, const QuadratureSettings& s) {
  double centre = b.omega_plus_bar() - w1;
  double half = 6.0 / b.coherence_time();
  double panel = std::min(0.5 / b.coherence_time(), 1.0 / b.correlation_time());
  if (b.kind() == BiphotonKind::separable_product) {
    const auto* p2 = b.photon(2);
    centre = p2->center();
    half = 9.0 * p2->width();
    panel = 0.5 * p2->width();
  }
  auto level = [&](int refinement) {
    const auto axis =
        quad::composite_axis(centre - half, centre + half, panel, s.order, refinement);
    double sum = 0.0;
    for (std::size_t i = 0; i < axis.size(); ++i) {
      const cplx psi = b.kind() == BiphotonKind::sampled_grid
                           ? uv_transform_sampled(b, w1, axis.nodes[i], false)
                           : closed_joint(b, w1, axis.nodes[i]);
      sum += axis.weights[i] * std::norm(psi);
    }
    return sum;
  };
  double coarse = level(0);
  for (int r = 1; r <= s.max_refinements; ++r) {
    const double fine = level(r);
    if (std::abs(fine - coarse) <= s.rel_tol * std::abs(fine) + s.abs_tol * s.abs_tol)
      return fine;
    coarse = fine;
  }
  throw AccuracyError("marginal spectrum did not converge");
}

double marginal_time_level(const Biphoton& b, double w1, int order, int refinement) {
  const auto sup = b.support();
  const double v_lo = sup.v_breaks.front();
  const double v_hi = sup.v_breaks.back();
  const double d1 = w1 - b.omega1_bar();
  const auto [pu, pv] = natural_panel_widths(b);
  double inner_panel = std::min(pu, pv);
  if (d1 != 0.0)
    inner_panel = std::min(inner_panel, 2.0 / std::abs(d1));

  const auto outer =
      quad::composite_axis(0.5 * (sup.u_lo - v_hi), 0.5 * (sup.u_hi - v_lo), 0.5 * pu, order,
                           refinement);
  double sum = 0.0;
  std::vector<double> breaks;
  for (std::size_t k = 0; k < outer.size(); ++k) {
    const double t2 = outer.nodes[k];
    const double lo = std::max(sup.u_lo - t2, t2 + v_lo);
    const double hi = std::min(sup.u_hi - t2, t2 + v_hi);
    if (!(hi > lo))
      continue;
    breaks.assign({lo});
    for (std::size_t m = 1; m + 1 < sup.v_breaks.size(); ++m) {
      const double t = t2 + sup.v_breaks[m];
      if (t > lo && t < hi)
        breaks.push_back(t);
    }
    breaks.push_back(hi);
    const auto inner = quad::composite_axis(breaks, inner_panel, order, refinement);
    cplx h{0.0, 0.0};
    for (std::size_t i = 0; i < inner.size(); ++i) {
      const double t1 = inner.nodes[i];
      h += inner.weights[i] * std::polar(1.0, d1 * t1) * b.envelope(t1 + t2, t1 - t2);
    }
    sum += outer.weights[k] * std::norm(h);
  }
  return sum / (2.0 * kPi);
}

double marginal_time_domain(const Biphoton& b, double w1, const QuadratureSettings& s) {
  if (b.kind() == BiphotonKind::sampled_grid)
    throw UsageError("time-domain marginal route needs an analytic wavefunction");
  double coarse = marginal_time_level(b, w1, s.order, 0);
  for (int r = 1; r <= s.max_refinements; ++r) {
    const double fine = marginal_time_level(b, w1, s.order, r);
    if (std::abs(fine - coarse) <= s.rel_tol * std::abs(fine) + s.abs_tol * s.abs_tol)
      return fine;
    coarse = fine;
  }
  throw AccuracyError("time-domain marginal did not converge");
}

// --- Plancherel --------------------------------------------------------------

double plancherel_sampled(const SampledGrid& g) {
  // Direct DFT onto the reciprocal grid. Only moduli matter, so the offsets
  // of the first nodes drop out.
  const std::size_t nu = g.u_axis().count;
  const std::size_t nv = g.v_axis().count;
  auto twiddles = [](std::size_t n) {
    std::vector<cplx> t(n);
    for (std::size_t k = 0; k < n; ++k)
      t[k] = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
    return t;
  };
  const auto tu = twiddles(nu);
  const auto tv = twiddles(nv);

  std::vector<cplx> partial(nu * nv);
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t l = 0; l < nv; ++l) {
      cplx acc{0.0, 0.0};
      for (std::size_t j = 0; j < nv; ++j)
        acc += g.at(i, j) * tv[(l * j) % nv];
      partial[i * nv + l] = acc;
    }
  double total = 0.0;
  for (std::size_t k = 0; k < nu; ++k)
    for (std::size_t l = 0; l < nv; ++l) {
      cplx acc{0.0, 0.0};
      for (std::size_t i = 0; i < nu; ++i)
        acc += partial[i * nv + l] * tu[(k * i) % nu];
      total += std::norm(acc);
    }
  // |Psi_kl| = du dv |acc| / 4pi on cells of size (4pi / (nu du)) x (2pi / (nv dv)).
  const double du = g.u_axis().step;
  const double dv = g.v_axis().step;
  const double amp = du * dv / (4.0 * kPi);
  const double cell = (4.0 * kPi / (nu * du)) * (2.0 * kPi / (nv * dv));
  return total * amp * amp * cell;
}

double plancherel_level(const Biphoton& b, int order, int refinement) {
  std::vector<double> a_breaks;
  std::vector<double> b_breaks;
  double pa = 0.0;
  double pb = 0.0;
  bool rotated = true;
  bool sinc_tail = false;
  const double T = b.coherence_time();
  const double tau = b.correlation_time();
  switch (b.kind()) {
  case BiphotonKind::gaussian:
    a_breaks = {b.omega_plus_bar() - 6.0 / T, b.omega_plus_bar() + 6.0 / T};
    b_breaks = {b.omega_minus_bar() - 7.0 / tau, b.omega_minus_bar() + 7.0 / tau};
    pa = 1.0 / T;
    pb = 1.0 / tau;
    break;
  case BiphotonKind::rectangular: {
    const double x = kPlancherelWindow / tau;
    const double m = b.omega_minus_bar();
    a_breaks = {b.omega_plus_bar() - 6.0 / T, b.omega_plus_bar() + 6.0 / T};
    b_breaks = {m - x, m + x};
    pa = 2.0 / T;
    pb = 2.0 / tau;
    sinc_tail = true;
    break;
  }
  case BiphotonKind::separable_product: {
    const auto* p1 = b.photon(1);
    const auto* p2 = b.photon(2);
    a_breaks = {p1->center() - 9.0 * p1->width(), p1->center() + 9.0 * p1->width()};
    b_breaks = {p2->center() - 9.0 * p2->width(), p2->center() + 9.0 * p2->width()};
    pa = 0.5 * p1->width();
    pb = 0.5 * p2->width();
    rotated = false;
    break;
  }
  case BiphotonKind::sampled_grid:
    throw UsageError("plancherel_level: sampled grids use the discrete transform");
  }

  auto density = [&](double a, double c) {
    return rotated ? std::norm(closed_joint(b, 0.5 * a + c, 0.5 * a - c))
                   : std::norm(closed_joint(b, a, c));
  };
  auto integrate = [&](const std::vector<double>& bb) {
    const auto ax = quad::composite_axis(a_breaks, pa, order, refinement);
    const auto bx = quad::composite_axis(bb, pb, order, refinement);
    double sum = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < bx.size(); ++j)
        row += bx.weights[j] * density(ax.nodes[i], bx.nodes[j]);
      sum += ax.weights[i] * row;
    }
    return sum;
  };

  double total = integrate(b_breaks);
  if (sinc_tail) {
    // For a 1/x^2 tail the mass beyond X equals the mass on [X/2, X].
    const double m = b.omega_minus_bar();
    const double x = kPlancherelWindow / tau;
    total += integrate({m + 0.5 * x, m + x});
    total += integrate({m - x, m - 0.5 * x});
  }
  return total;
}

} // namespace

std::string to_string(SpectralPath path) {
  switch (path) {
  case SpectralPath::closed_form:
    return "closed-form";
  case SpectralPath::time_domain_quadrature:
    return "time-domain-quadrature";
  case SpectralPath::kernel_convolution:
    return "kernel-convolution";
  }
  return "unknown";
}

SpectralPath parse_spectral_path(const std::string& text) {
  if (text == "closed-form" || text == "closed")
    return SpectralPath::closed_form;
  if (text == "quadrature" || text == "time-domain-quadrature")
    return SpectralPath::time_domain_quadrature;
  if (text == "kernel" || text == "kernel-convolution")
    return SpectralPath::kernel_convolution;
  throw UsageError("unknown spectral path '" + text + "'");
}

double gaussian_spectral_amplitude(double T, double tau) {
  return std::sqrt(2.0 * tau * T / kPi);
}

double rectangular_spectral_amplitude(double T, double tau) {
  return std::pow(2.0 / (kPi * kPi * kPi), 0.25) * std::sqrt(tau * T);
}

bool has_closed_form_joint(const Biphoton& b) {
  return b.kind() != BiphotonKind::sampled_grid;
}

bool has_closed_form_time_ordered(const Biphoton& b) {
  return b.kind() == BiphotonKind::gaussian || b.kind() == BiphotonKind::rectangular;
}

cplx joint_spectrum(const Biphoton& b, double w1, double w2, SpectralPath path,
                    const QuadratureSettings& settings) {
  require_finite(w1, w2, "joint_spectrum");
  switch (path) {
  case SpectralPath::closed_form:
    return closed_joint(b, w1, w2);
  case SpectralPath::time_domain_quadrature:
    return uv_transform(b, w1, w2, false, settings);
  case SpectralPath::kernel_convolution:
    break;
  }
  throw UsageError("the kernel-convolution path applies to time-ordered spectra only");
}

cplx time_ordered_spectrum(const Biphoton& b, double w1, double w2, SpectralPath path,
                           const QuadratureSettings& settings) {
  require_finite(w1, w2, "time_ordered_spectrum");
  switch (path) {
  case SpectralPath::closed_form:
    return closed_time_ordered(b, w1, w2);
  case SpectralPath::time_domain_quadrature:
    return uv_transform(b, w1, w2, true, settings);
  case SpectralPath::kernel_convolution:
    return kernel_time_ordered(b, w1, w2);
  }
  throw UsageError("unknown spectral path");
}

double one_photon_marginal_spectrum(const Biphoton& b, double w1, MarginalRoute route,
                                    const QuadratureSettings& settings) {
  if (!std::isfinite(w1))
    throw DomainError("one_photon_marginal_spectrum: frequency must be finite");
  if (route == MarginalRoute::time_domain)
    return marginal_time_domain(b, w1, settings);
  return marginal_spectral(b, w1, settings);
}

double plancherel_norm(const Biphoton& b, const QuadratureSettings& settings) {
  if (const auto* g = b.grid())
    return plancherel_sampled(*g);
  double coarse = plancherel_level(b, settings.order, 0);
  for (int r = 1; r <= settings.max_refinements; ++r) {
    const double fine = plancherel_level(b, settings.order, r);
    if (std::abs(fine - coarse) <= 1e-12 * std::abs(fine))
      return fine;
    coarse = fine;
  }
  throw AccuracyError("Plancherel integral did not converge");
}

KernelGrid default_kernel_grid(const Biphoton& b, double w1, double w2) {
  const double x = 0.5 * (w1 - w2);
  KernelGrid grid;
  grid.abs_tolerance = 1e-12;
  switch (b.kind()) {
  case BiphotonKind::gaussian: {
    const double tau = b.correlation_time();
    grid.spacing = 0.5 / tau;
    grid.pv_halfwidth = 0.25 / tau;
    grid.half_extent = std::abs(x - b.omega_minus_bar()) + 8.0 / tau;
    break;
  }
  case BiphotonKind::rectangular: {
    // The 1/x decay of sinc is cut at kSincWindow / tau; the truncation
    // error is of order (kSincWindow)^-2 relative.
    const double tau = b.correlation_time();
    grid.spacing = 0.5 / tau;
    grid.pv_halfwidth = 0.25 / tau;
    grid.half_extent = std::abs(x - b.omega_minus_bar()) + kSincWindow / tau;
    grid.tolerance = 1e-7;
    break;
  }
  case BiphotonKind::separable_product: {
    // f(x) = Psi1(w+/2 + x) Psi2(w+/2 - x) peaks near c1 - w+/2 and w+/2 - c2.
    const auto* p1 = b.photon(1);
    const auto* p2 = b.photon(2);
    const double half_plus = 0.5 * (w1 + w2);
    const double wmin = std::min(p1->width(), p2->width());
    const double wmax = std::max(p1->width(), p2->width());
    const double reach = std::max(std::abs(x - (p1->center() - half_plus)),
                                  std::abs(x - (half_plus - p2->center())));
    grid.spacing = 0.5 * wmin;
    grid.pv_halfwidth = 0.25 * wmin;
    grid.half_extent = reach + 20.0 * wmax;
    break;
  }
  case BiphotonKind::sampled_grid:
    throw UsageError("no kernel grid for sampled biphotons");
  }
  return grid;
}

cplx JointSpectrum::amplitude(double w1, double w2) const {
  const auto path =
      path_ == SpectralPath::kernel_convolution ? SpectralPath::closed_form : path_;
  return joint_spectrum(source_, w1, w2, path, settings_);
}

} // namespace tpa
