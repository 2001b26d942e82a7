// Test-side oracles, independent of the library's computation paths:
// adaptive quadrature, a standalone convolution quadrature, brute-force
// metric summation, and the closed-form corner error of |sin(pi x)| under
// the kernel family.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracles {

inline constexpr double kPi = std::numbers::pi;

// --- adaptive Simpson quadrature --------------------------------------------

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson integral of f over [a, b] to absolute tolerance tol.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    return detail::adaptive_step(f, a, b, fa, fm, fb, detail::simpson(a, b, fa, fm, fb), tol, 40);
}

// --- standalone convolution quadrature --------------------------------------

/// fejer_n evaluated from scratch (quotient form away from zero).
inline double fejer_ref(double x, int n) {
    const double u = kPi * n * x;
    if (std::abs(u) < 1e-7) return n * (1.0 - u * u / 3.0);
    const double s = std::sin(u) / u;
    return n * s * s;
}

/// Trapezoid quadrature of integral f(x - y) fejer_n(y) dy over [-A, A] at
/// step h, written against the analytic signal f.  This is the independent
/// route used to cross-check the grid convolution.
inline double convolve_point(const std::function<double(double)>& f, double x, int n, double tail,
                             double h) {
    const auto cells = static_cast<long long>(std::llround(2.0 * tail / h));
    double acc = 0.0;
    for (long long j = 0; j <= cells; ++j) {
        const double y = -tail + h * static_cast<double>(j);
        const double w = (j == 0 || j == cells) ? 0.5 : 1.0;
        acc += w * fejer_ref(y, n) * f(x - y);
    }
    return acc * h;
}

// --- brute-force metric sums -------------------------------------------------

/// Double loop over (component, window) with no shortcuts; sups supplied by
/// the caller as a lookup.
inline double bebutov_sum(const std::function<double(int, int)>& sup, int components, int depth) {
    double acc = 0.0;
    for (int n = 1; n <= components; ++n)
        for (int nw = 1; nw <= depth; ++nw) acc += sup(n, nw) / std::pow(2.0, n + nw);
    return acc;
}

inline double bernstein_sum(const std::function<double(int)>& sup, int depth) {
    double acc = 0.0;
    for (int n = 1; n <= depth; ++n) acc += sup(n) / std::pow(2.0, n);
    return acc;
}

// --- closed-form corner error of |sin(pi x)| ---------------------------------

/// |sin(pi x)| has the cosine series 2/pi - (4/pi) sum_k cos(2 pi k x)/(4k^2-1);
/// convolving with fejer_n scales line k by max(0, 1 - k/n), so the error at
/// the corner x = 0 (where every term aligns, making it the sup) telescopes to
///   (4/pi) [ (1/(4n)) (2 O_n - 1 + 1/(2n+1)) + 1/(2(2n+1)) ],
/// with O_n the n-th odd harmonic sum.
inline double sinabs_corner_error(int n) {
    double odd_harmonic = 0.0;
    for (int k = 1; k <= n; ++k) odd_harmonic += 1.0 / (2.0 * k - 1.0);
    return (4.0 / kPi) * ((1.0 / (4.0 * n)) * (2.0 * odd_harmonic - 1.0 + 1.0 / (2.0 * n + 1.0)) +
                          1.0 / (2.0 * (2.0 * n + 1.0)));
}

/// Forward-stepping oracle for suspension flows: advance the fiber
/// coordinate in increments of dt, crossing the roof eagerly.  Returns the
/// (base, fiber) pair after time t (t >= 0).
inline std::pair<double, double> suspension_stepper(const std::function<double(double)>& base_map,
                                                    const std::function<double(double)>& roof,
                                                    double x, double s, double t, double dt) {
    double remaining = t;
    while (remaining > 0.0) {
        const double step = std::min(dt, remaining);
        s += step;
        remaining -= step;
        while (s >= roof(x)) {
            s -= roof(x);
            x = base_map(x);
        }
    }
    return {x, s};
}

}  // namespace oracles
