// Uniform-grid representation of continuous functions on a window of R,
// the shift action, truncated sup-norms, and the two product metrics
// (the double-sum metric on [0,1]^m-valued functions and the single-sum
// metric on [-1,1]-valued band-limited functions), plus the affine
// identification between the two codomains.

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace flowcube::funcspace {

/// Declared codomain of a sampled function.
enum class RangeTag {
    UnitInterval,   // values in [0,1]^m
    SymmetricUnit,  // values in [-1,1]^m
};

std::string to_string(RangeTag tag);
RangeTag range_tag_from_string(const std::string& s);

/// A vector-valued function tabulated on the uniform grid
/// start, start+h, ..., start+(count-1)h.  Evaluation between grid points is
/// piecewise linear (order 1 preserves the declared codomain); evaluation
/// outside the window clamps to the nearest endpoint sample.  Metric and norm
/// computations never accept clamp-extrapolated regions: they throw when the
/// window does not cover the requested interval.
///
/// Stored values must lie in the declared codomain; a slack of 1e-12 absorbs
/// rounding dust (such values are snapped to the boundary), anything beyond
/// is rejected.
class SampledFunction {
public:
    SampledFunction(double start, double step, std::size_t components,
                    std::vector<double> flat_values, RangeTag range);

    static SampledFunction from_rows(double start, double step,
                                     const std::vector<std::vector<double>>& rows, RangeTag range);

    static SampledFunction tabulate(double start, double step, std::size_t count, RangeTag range,
                                    const std::function<double(double)>& fn);

    static SampledFunction tabulate_vector(double start, double step, std::size_t count,
                                           std::size_t components, RangeTag range,
                                           const std::function<void(double, std::vector<double>&)>& fn);

    double start() const { return start_; }
    double step() const { return step_; }
    double end() const { return start_ + step_ * static_cast<double>(size_ - 1); }
    std::size_t size() const { return size_; }
    std::size_t components() const { return components_; }
    RangeTag range() const { return range_; }

    /// True when the window contains [lo, hi] (with a 1e-9 grid-arithmetic slack).
    bool covers(double lo, double hi) const;

    /// Stored sample, exact.
    double value_at(std::size_t index, std::size_t component = 0) const;

    /// Piecewise-linear evaluation; exact at grid points, clamped outside the
    /// window.
    double eval(double x, std::size_t component = 0) const;

    /// The shift action: eval(shifted(r), x) == eval(*this, x + r) wherever
    /// both windows cover.  Values are untouched; only the window moves.
    SampledFunction shifted(double r) const;

    /// Single-component copy.
    SampledFunction component_function(std::size_t component) const;

    const std::vector<double>& flat_values() const { return values_; }

private:
    double start_;
    double step_;
    std::size_t size_;
    std::size_t components_;
    RangeTag range_;
    std::vector<double> values_;  // row-major: values_[i*components_ + c]
};

/// Truncation depth for the metric sums.  The reported error bound is the
/// full geometric tail of the omitted terms with every sup-norm replaced by
/// the codomain diameter.
struct MetricTruncation {
    int depth = 40;
    void validate() const;
};

struct MetricValue {
    double value = 0.0;
    double error_bound = 0.0;
};

/// Exact sup of |f_c - g_c| over [-N, N] for the piecewise-linear
/// interpolants: the difference is again piecewise linear, so the maximum
/// over the union of both grids (plus the interval endpoints) is the true
/// supremum of the interpolants.  Against the underlying continuous
/// functions this understates the sup by at most h^2/8 * max|f''| per
/// function (the linear-interpolation guard).
/// Throws when either window fails to cover [-N, N]; clamp extrapolation is
/// never used here.
double sup_dist(const SampledFunction& f, const SampledFunction& g, double n_window,
                std::size_t component);

/// Truncated double-sum metric on [0,1]^m-valued functions:
///   sum over components n and windows N of sup_{[-N,N]} |f_n - g_n| / 2^{n+N},
/// both indices starting at 1, components truncated at min(m, K) and windows
/// at K.  Functions with m stored components are compared as if padded
/// identically beyond component m, so the pad contributes nothing to the true
/// metric; the error bound covers every omitted (n, N) term with sup replaced
/// by the codomain diameter 1.
MetricValue bebutov_metric(const SampledFunction& f, const SampledFunction& g,
                           MetricTruncation trunc);

/// Truncated single-sum metric on [-1,1]-valued functions:
///   sum over n of sup_{[-n,n]} |f - g| / 2^n,  n = 1..K,
/// error bound = geometric tail with omitted sups replaced by the diameter 2.
MetricValue bernstein_metric(const SampledFunction& f, const SampledFunction& g,
                             MetricTruncation trunc);

/// Band-limit certificate: max magnitude of the windowed numerical Fourier
/// transform of f (integrated over [-W, W] by trapezoid rule) on the
/// frequency grid +-(a + j*a/16), j = 1..16, which covers a < |xi| <= 2a.
/// Small residual is evidence that f lies in the band-[-a,a] class; the
/// appropriate comparison bound depends on what is known about f (kernel
/// tails for integrable f, edge-distance leakage bounds for bounded
/// band-limited f) and is documented at the call sites.
double band_limit_residual(const SampledFunction& f, double band, double window);

/// Affine identification [-1,1] -> [0,1], x -> (x+1)/2.  Exact on dyadic
/// values and always lands inside [0,1].
SampledFunction affine_to_unit(const SampledFunction& f);

/// Inverse identification [0,1] -> [-1,1], x -> 2x-1.
SampledFunction affine_to_symmetric(const SampledFunction& f);

}  // namespace flowcube::funcspace
