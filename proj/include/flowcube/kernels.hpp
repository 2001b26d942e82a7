// Tent functions, their Fejer-type inverse transforms, and integral
// accounting with rigorous tail bounds.
//
// The kernel family is
//     tent_n(x)  = max(0, 1 - |x|/n)
//     fejer_n(x) = n * sin^2(pi n x) / (pi n x)^2,   fejer_n(0) = n,
// where fejer_n is the inverse Fourier transform of tent_n (convention
// F(f)(xi) = integral f(t) e^{-2 pi i t xi} dt).  fejer_n is continuous,
// nonnegative, has unit integral over R, and its Fourier transform is
// tent_n, supported in [-n, n].

#pragma once

#include <stdexcept>

namespace flowcube::kernels {

/// Tabulation request for one kernel: index n, evaluation window [-W, W],
/// grid step h.  Requires h <= 1/(4n): at least 4 samples per oscillation
/// period 1/n of fejer_n.
struct KernelSpec {
    int n = 1;
    double eval_window = 400.0;
    double step = 1.0 / 32.0;

    void validate() const;
};

/// Result of integrating a tabulated kernel over its window.
struct KernelMass {
    double mass = 0.0;        // trapezoid integral over [-W, W]
    double tail_bound = 0.0;  // 2 / (pi^2 n W), bounds the omitted |x| > W mass
};

/// tent_n(x) = max(0, 1 - |x|/n).  Even, supported on [-n, n], tent_n(0) = 1.
double tent(double x, int n);

/// fejer_n(x) >= 0 always.  Near the removable singularity (|pi n x| < 1e-4)
/// the quotient is replaced by the truncated series n*(1 - u^2/3 + 2u^4/45),
/// u = pi n x.
double fejer(double x, int n);

/// Trapezoid integral of fejer_n over [-W, W] plus the closed-form tail bound.
/// The true mass satisfies mass + tail = 1 with 0 < tail <= tail_bound, so
/// |mass - 1| <= tail_bound + quadrature error.  The trapezoid error constant
/// is estimated by Richardson comparison in verify::check_kernel_properties.
/// The grid step is snapped down so the window splits into a whole number of
/// cells (h_eff = 2W/ceil(2W/h) <= h).
KernelMass kernel_mass(int n, double window, double step);

/// Exact analytic Fourier transform of fejer_n, i.e. tent_n(xi).  Ground
/// truth for the windowed numerical transforms in verify.
double fourier_of_fejer(int n, double xi);

/// Tail bound 2/(pi^2 n W) for the mass of fejer_n outside [-W, W]
/// (from sin^2 <= 1: each side contributes at most 1/(pi^2 n W)).
double tail_mass_bound(int n, double window);

/// Default tabulation step, 8 samples per oscillation period.
inline double default_step(int n) { return 1.0 / (8.0 * n); }

}  // namespace flowcube::kernels
