#pragma once

#include <complex>
#include <functional>

namespace tpa {

using cplx = std::complex<double>;

/// Plasma dispersion value F(xi) for real xi; real() is exp(-xi^2),
/// imag() is (2/sqrt(pi)) D(xi).
using PlasmaDispersionValue = cplx;

/// Dawson integral D(x) = exp(-x^2) * integral_0^x exp(y^2) dy.
///
/// |x| <= 6 integrates D' = 1 - 2xD from D(0) = 0 with classical RK4 on a
/// precomputed table (step 1/2048) plus one partial step to x. Beyond that
/// the asymptotic series sum (2n-1)!! / (2^{n+1} x^{2n+1}) is summed until
/// its terms stop shrinking. Absolute error is below 1e-10 for |x| <= 20.
/// Throws DomainError for non-finite x.
double dawson(double x);

/// F(xi) = exp(-xi^2) (1 + (2i/sqrt(pi)) integral_0^xi exp(y^2) dy).
PlasmaDispersionValue plasma_dispersion(double xi);

/// sin(x)/x, equal to 1 at 0.
double sinc(double x);

/// Integration grid for heaviside_kernel_apply.
/// The principal-value integral runs over s in [0, half_extent] in panels
/// of `spacing`. The first panel [0, pv_halfwidth] holds the pole window.
struct KernelGrid {
  double spacing = 0.0;
  double half_extent = 0.0;
  double pv_halfwidth = 0.0;
  double tolerance = 1e-9;    // step-halving agreement, relative to max(|f(omega)|, |result|)
  double abs_tolerance = 0.0; // absolute floor for points where both vanish
};

/// (Theta * f)(omega) for Theta(w) = sqrt(pi/2) delta(w) - (i/sqrt(2 pi)) P/w:
///
///   f(omega)/2 - (i / 2pi) PV integral f(omega - w') / w' dw'.
///
/// This is the frequency image of multiplying the time signal by theta(-t)
/// under the e^{+i w t} transform convention. The principal value is taken
/// by pairing w' with -w', which leaves the regular integrand
/// [f(omega - s) - f(omega + s)] / s on s > 0.
///
/// Throws DomainError for an invalid grid and AccuracyError when halving
/// the spacing changes the result by more than grid.tolerance.
cplx heaviside_kernel_apply(const std::function<cplx(double)>& f, double omega,
                            const KernelGrid& grid);

} // namespace tpa
