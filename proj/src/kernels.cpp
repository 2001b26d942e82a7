#include "flowcube/kernels.hpp"

#include <cmath>
#include <numbers>

namespace flowcube::kernels {

namespace {

constexpr double kPi = std::numbers::pi;

void require_valid_index(int n) {
    if (n < 1) throw std::invalid_argument("kernel index n must be >= 1");
}

}  // namespace

void KernelSpec::validate() const {
    require_valid_index(n);
    if (eval_window <= 0.0) throw std::invalid_argument("kernel eval_window must be positive");
    if (step <= 0.0) throw std::invalid_argument("kernel step must be positive");
    if (step > 1.0 / (4.0 * n) + 1e-12)
        throw std::invalid_argument("kernel step too coarse: need h <= 1/(4n)");
}

double tent(double x, int n) {
    require_valid_index(n);
    const double t = 1.0 - std::abs(x) / n;
    return t > 0.0 ? t : 0.0;
}

double fejer(double x, int n) {
    require_valid_index(n);
    const double u = kPi * n * x;
    if (std::abs(u) < 1e-4) {
        // sin^2(u)/u^2 = 1 - u^2/3 + 2u^4/45 - ..., next term O(u^6)
        const double u2 = u * u;
        return n * (1.0 - u2 / 3.0 + (2.0 / 45.0) * u2 * u2);
    }
    const double s = std::sin(u) / u;
    return n * s * s;
}

double tail_mass_bound(int n, double window) {
    require_valid_index(n);
    if (window <= 0.0) throw std::invalid_argument("window must be positive");
    return 2.0 / (kPi * kPi * n * window);
}

KernelMass kernel_mass(int n, double window, double step) {
    KernelSpec spec{n, window, step};
    spec.validate();

    const auto cells = static_cast<std::size_t>(std::ceil(2.0 * window / step - 1e-9));
    const double h = 2.0 * window / static_cast<double>(cells);

    double acc = 0.5 * (fejer(-window, n) + fejer(window, n));
    for (std::size_t j = 1; j < cells; ++j) {
        acc += fejer(-window + h * static_cast<double>(j), n);
    }

    KernelMass out;
    out.mass = acc * h;
    out.tail_bound = tail_mass_bound(n, window);
    return out;
}

double fourier_of_fejer(int n, double xi) { return tent(xi, n); }

}  // namespace flowcube::kernels
