// The two-stage embedding pipeline.
//
// Stage 1 (orbit traces): a flow state x becomes the function
//     t -> coords(evolve(x, t))
// sampled on [-W, W], a continuous [0,1]^m-valued function of time.
// Shifting time by r is the same as evolving the state by r, which is the
// equivariance contract checked by the verify suites.
//
// Stage 2 (band-limiting): each trace component, rescaled to [-1,1] via
// x -> 2x - 1, is convolved with fejer_n for every level n <= L.  Level n
// keeps components i <= min(n, m), so the image is the truncated tuple
//     (f_1*phi_1; f_1*phi_2, f_2*phi_2; ...).
// Convolved components are 1-Lipschitz in the sup norm (unit kernel mass),
// band-limited to [-n, n] up to the certified budget, and live on the
// shrunken reliable window [-(W-A), W-A]; the affine map (x+1)/2 produces
// the [0,1]-valued view of every component.
//
// All error accounting is explicit: per-side convolution tail 1/(pi^2 n A)
// for |f| <= 1, plus the sampling term (2 pi nu_max)^2 h^2 / 8 where
// nu_max = 1.5 caps the instantaneous trace frequency of the built-in flows
// (torus: 1 and alpha; suspensions: 1/roof_min <= 4/3; fixed-circle: <= 1).

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "flowcube/flows.hpp"
#include "flowcube/funcspace.hpp"

namespace flowcube::embedding {

/// Frequency cap used in the documented interpolation/quadrature term of the
/// error budgets (see header comment).
inline constexpr double kTraceFrequencyCap = 1.5;

struct EmbeddingConfig {
    int levels = 8;          // L: levels 1..L of the product are realized
    double window = 160.0;   // W: orbit traces are sampled on [-W, W]
    double step = 0.005;     // h: grid step
    double tail = 150.0;     // A: convolution tail radius, quadrature runs over [-A, A]
    int metric_depth = 40;   // K: truncation depth handed to metric computations

    /// Requires 0 < A < W, h <= 1/(4L) (kernel sampling invariant at the top
    /// level), and W, A integer multiples of h (grids must align exactly).
    void validate() const;

    double reliable_half_width() const { return window - tail; }

    /// Per-level tail bound 2/(pi^2 n A), valid for |f| <= 1.
    double conv_tail_bound(int n) const;

    /// Sampling term of the budget: (2 pi nu_max)^2 h^2 / 8.
    double interp_bound() const;

    /// conv_tail_bound(n) + interp_bound(): the certified sup-norm error of a
    /// level-n component, and the equivariance budget at level n.
    double level_budget(int n) const;
};

/// Which quadrature route convolve() takes.  Both evaluate the identical
/// trapezoid sum; Fast goes through the FFT and must agree with Direct to
/// 1e-6 before being trusted (dual-path check).
enum class ConvPath { Direct, Fast };

/// A convolved trace component with its certificate data.
struct ConvolvedFunction {
    funcspace::SampledFunction fn;  // symmetric-unit range on [-(W-A), W-A]
    double error_budget;            // conv tail + sampling term
    double pre_clamp_sup;           // sup before the final clamp to [-1,1]
    double clamp_excess;            // pre_clamp_sup - 1 when positive
};

/// The truncated image of one state: levels[n-1][i-1] is component i of
/// level n (1 <= i <= min(n, m)), together with the affine [0,1] view.
struct EmbeddedPoint {
    std::vector<std::vector<ConvolvedFunction>> levels;
    std::vector<std::vector<funcspace::SampledFunction>> unit_levels;

    const ConvolvedFunction& at(int level, int component) const;
};

/// Stage 1: trace of x through the flow's coordinates, sampled on [-W, W].
funcspace::SampledFunction orbit_trace(const flows::Flow& flow, const flows::Flow::State& x,
                                       const EmbeddingConfig& cfg);

/// One grid convolution with fejer_n over y in [-A, A]; f must be a
/// single-component function whose aligned grid covers [-W, W].  The result
/// window is [-(W-A), W-A], so no clamp extrapolation of f ever happens.
/// Throws when the final clamp exceeds the certified budget.
ConvolvedFunction convolve(const funcspace::SampledFunction& f, int n, const EmbeddingConfig& cfg,
                           ConvPath path = ConvPath::Fast);

/// Holds the per-config convolution plan (weighted kernel samples and their
/// spectra) so that many states can be embedded without re-planning.
class Embedder {
public:
    Embedder(flows::Flow flow, EmbeddingConfig cfg, ConvPath path = ConvPath::Fast,
             bool parallel_components = false);

    const EmbeddingConfig& config() const { return cfg_; }
    const flows::Flow& flow() const { return flow_; }

    /// Stage 2 only: embed an already-built trace (m >= 1 components,
    /// unit-interval range, window [-W, W]).
    EmbeddedPoint embed_trace(const funcspace::SampledFunction& trace) const;

    /// full embedding = stage 2 after the orbit trace of x.
    EmbeddedPoint embed(const flows::Flow::State& x) const;

private:
    flows::Flow flow_;
    EmbeddingConfig cfg_;
    ConvPath path_;
    bool parallel_;
    std::size_t padded_ = 0;                           // FFT size for this config
    std::vector<std::vector<double>> kernel_weights_;  // per level: h-weighted trapezoid samples
    std::vector<std::vector<std::complex<double>>> kernel_spectra_;  // per level, Fast path only
};

/// Convenience wrappers for single calls.
EmbeddedPoint stage2_embed(const funcspace::SampledFunction& trace, const EmbeddingConfig& cfg,
                           ConvPath path = ConvPath::Fast);
EmbeddedPoint full_embed(const flows::Flow& flow, const flows::Flow::State& x,
                         const EmbeddingConfig& cfg, ConvPath path = ConvPath::Fast);

}  // namespace flowcube::embedding
