// Radix-2 FFT and FFT-backed linear convolution.
//
// This is the fast path behind the grid convolutions in embedding.cpp.  It is
// only trusted after the dual-path equivalence check against the direct
// trapezoid sum (see tests and the verify suites).

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace flowcube::fft {

/// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

/// In-place iterative radix-2 transform.  Size of `a` must be a power of two.
/// `inverse` applies the conjugate transform including the 1/N factor.
void transform(std::vector<std::complex<double>>& a, bool inverse);

/// Forward transform of a real sequence zero-padded to `padded` (power of two).
std::vector<std::complex<double>> forward_real(const std::vector<double>& a, std::size_t padded);

/// Full linear convolution: result[k] = sum_j a[j] * b[k - j],
/// length a.size() + b.size() - 1.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b);

/// Linear convolution where the spectra are already available (both padded to
/// the same power-of-two length, which must be >= la + lb - 1).  Returns the
/// first `out_len` entries of the product sequence.
std::vector<double> convolve_spectra(const std::vector<std::complex<double>>& fa,
                                     const std::vector<std::complex<double>>& fb,
                                     std::size_t out_len);

}  // namespace flowcube::fft
