#include "flowcube/fft.hpp"

#include <numbers>
#include <stdexcept>

namespace flowcube::fft {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void transform(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft::transform: size must be a nonzero power of two");

    // bit reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }

    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

std::vector<std::complex<double>> forward_real(const std::vector<double>& a, std::size_t padded) {
    if (padded < a.size())
        throw std::invalid_argument("fft::forward_real: padded length too small");
    std::vector<std::complex<double>> fa(padded, {0.0, 0.0});
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
    transform(fa, false);
    return fa;
}

std::vector<double> convolve_spectra(const std::vector<std::complex<double>>& fa,
                                     const std::vector<std::complex<double>>& fb,
                                     std::size_t out_len) {
    if (fa.size() != fb.size())
        throw std::invalid_argument("fft::convolve_spectra: spectra size mismatch");
    std::vector<std::complex<double>> prod(fa.size());
    for (std::size_t i = 0; i < fa.size(); ++i) prod[i] = fa[i] * fb[i];
    transform(prod, true);
    if (out_len > prod.size())
        throw std::invalid_argument("fft::convolve_spectra: out_len exceeds transform size");
    std::vector<double> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) out[i] = prod[i].real();
    return out;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t padded = next_pow2(out_len);
    const auto fa = forward_real(a, padded);
    const auto fb = forward_real(b, padded);
    return convolve_spectra(fa, fb, out_len);
}

}  // namespace flowcube::fft
