#include "flowcube/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>

#include "flowcube/fft.hpp"
#include "flowcube/kernels.hpp"

namespace flowcube::embedding {

using funcspace::RangeTag;
using funcspace::SampledFunction;

namespace {

constexpr double kPi = std::numbers::pi;

/// Nearest integer multiple check: x must equal k*h for integer k >= 0.
long long grid_cells(double x, double h, const char* what) {
    const auto k = static_cast<long long>(std::llround(x / h));
    if (k < 1 || std::abs(static_cast<double>(k) * h - x) > 1e-9)
        throw std::invalid_argument(std::string("EmbeddingConfig: ") + what +
                                    " must be a positive integer multiple of step");
    return k;
}

/// h-weighted trapezoid samples of fejer_n on [-A, A].
std::vector<double> weighted_kernel(int n, double tail, double h) {
    const auto ma = grid_cells(tail, h, "tail");
    std::vector<double> wk(static_cast<std::size_t>(2 * ma) + 1);
    for (long long j = 0; j <= 2 * ma; ++j) {
        const double y = -tail + h * static_cast<double>(j);
        const double w = (j == 0 || j == 2 * ma) ? 0.5 : 1.0;
        wk[static_cast<std::size_t>(j)] = w * h * kernels::fejer(y, n);
    }
    return wk;
}

/// Samples of a single-component f, taken as-is, on the aligned grid
/// covering [-W, W].  Values are within [-1, 1] for either range tag.
std::vector<double> window_samples(const SampledFunction& f, double window, double h) {
    if (f.components() != 1)
        throw std::invalid_argument("convolve: input must be single-component");
    if (std::abs(f.step() - h) > 1e-12)
        throw std::invalid_argument("convolve: input grid step must match config step");
    if (!f.covers(-window, window))
        throw std::invalid_argument("convolve: input window must cover [-W, W]");
    const auto i0 = static_cast<long long>(std::llround((-window - f.start()) / h));
    if (i0 < 0 || std::abs(f.start() + static_cast<double>(i0) * h - (-window)) > 1e-9)
        throw std::invalid_argument("convolve: input grid does not align with [-W, W]");

    const auto mw = grid_cells(window, h, "window");
    std::vector<double> out(static_cast<std::size_t>(2 * mw) + 1);
    for (long long i = 0; i <= 2 * mw; ++i)
        out[static_cast<std::size_t>(i)] = f.value_at(static_cast<std::size_t>(i0 + i));
    return out;
}

ConvolvedFunction assemble(std::vector<double> raw, int n, const EmbeddingConfig& cfg) {
    const double budget = cfg.level_budget(n);
    double sup = 0.0;
    for (const double v : raw) sup = std::max(sup, std::abs(v));
    const double excess = std::max(0.0, sup - 1.0);
    if (excess > budget)
        throw std::runtime_error("convolve: clamp magnitude exceeds the certified budget");
    for (auto& v : raw) v = std::clamp(v, -1.0, 1.0);
    return ConvolvedFunction{SampledFunction(-(cfg.window - cfg.tail), cfg.step, 1, std::move(raw),
                                             RangeTag::SymmetricUnit),
                             budget, sup, excess};
}

std::vector<double> convolve_direct(const std::vector<double>& f, const std::vector<double>& wk,
                                    std::size_t out_len) {
    // out[k] = sum_j wk[j] * f[k + (len(wk)-1) - j]
    const std::size_t mk = wk.size() - 1;
    std::vector<double> out(out_len, 0.0);
    for (std::size_t k = 0; k < out_len; ++k) {
        double acc = 0.0;
        const double* fp = f.data() + k;
        for (std::size_t j = 0; j <= mk; ++j) acc += wk[j] * fp[mk - j];
        out[k] = acc;
    }
    return out;
}

std::vector<double> convolve_fast(const std::vector<double>& f, const std::vector<double>& wk,
                                  std::size_t out_len) {
    const auto full = fft::convolve(f, wk);
    const std::size_t off = wk.size() - 1;
    return {full.begin() + static_cast<std::ptrdiff_t>(off),
            full.begin() + static_cast<std::ptrdiff_t>(off + out_len)};
}

}  // namespace

void EmbeddingConfig::validate() const {
    if (levels < 1) throw std::invalid_argument("EmbeddingConfig: levels must be >= 1");
    if (metric_depth < 1) throw std::invalid_argument("EmbeddingConfig: metric depth must be >= 1");
    if (step <= 0.0) throw std::invalid_argument("EmbeddingConfig: step must be positive");
    if (tail <= 0.0 || window <= 0.0)
        throw std::invalid_argument("EmbeddingConfig: window and tail must be positive");
    if (tail >= window) throw std::invalid_argument("EmbeddingConfig: tail radius must satisfy A < W");
    if (step > 1.0 / (4.0 * levels) + 1e-12)
        throw std::invalid_argument("EmbeddingConfig: step too coarse, need h <= 1/(4L)");
    grid_cells(window, step, "window");
    grid_cells(tail, step, "tail");
    if (reliable_half_width() < step)
        throw std::invalid_argument("EmbeddingConfig: reliable window [-(W-A), W-A] is degenerate");
}

double EmbeddingConfig::conv_tail_bound(int n) const {
    if (n < 1) throw std::invalid_argument("level index must be >= 1");
    return 2.0 / (kPi * kPi * static_cast<double>(n) * tail);
}

double EmbeddingConfig::interp_bound() const {
    const double omega = 2.0 * kPi * kTraceFrequencyCap;
    return omega * omega * step * step / 8.0;
}

double EmbeddingConfig::level_budget(int n) const { return conv_tail_bound(n) + interp_bound(); }

const ConvolvedFunction& EmbeddedPoint::at(int level, int component) const {
    const auto n = static_cast<std::size_t>(level);
    const auto i = static_cast<std::size_t>(component);
    if (level < 1 || n > levels.size() || component < 1 || i > levels[n - 1].size())
        throw std::out_of_range("EmbeddedPoint: no such (level, component)");
    return levels[n - 1][i - 1];
}

SampledFunction orbit_trace(const flows::Flow& flow, const flows::Flow::State& x,
                            const EmbeddingConfig& cfg) {
    cfg.validate();
    const auto mw = static_cast<long long>(std::llround(cfg.window / cfg.step));
    const auto count = static_cast<std::size_t>(2 * mw) + 1;
    return SampledFunction::tabulate_vector(
        -cfg.window, cfg.step, count, flow.coord_dim(), RangeTag::UnitInterval,
        [&](double t, std::vector<double>& row) {
            const auto c = flow.coords(flow.evolve(x, t));
            std::copy(c.begin(), c.end(), row.begin());
        });
}

ConvolvedFunction convolve(const SampledFunction& f, int n, const EmbeddingConfig& cfg,
                           ConvPath path) {
    cfg.validate();
    if (n < 1) throw std::invalid_argument("convolve: kernel index must be >= 1");
    if (cfg.step > 1.0 / (4.0 * n) + 1e-12)
        throw std::invalid_argument("convolve: step too coarse for this level, need h <= 1/(4n)");
    const auto samples = window_samples(f, cfg.window, cfg.step);
    const auto wk = weighted_kernel(n, cfg.tail, cfg.step);
    const std::size_t out_len = samples.size() - wk.size() + 1;
    auto raw = (path == ConvPath::Direct) ? convolve_direct(samples, wk, out_len)
                                          : convolve_fast(samples, wk, out_len);
    return assemble(std::move(raw), n, cfg);
}

namespace {

/// One complex FFT carries two real sequences (a + i b); this recovers the
/// two spectra through conjugate symmetry.
void split_packed_spectrum(const std::vector<std::complex<double>>& packed,
                           std::vector<std::complex<double>>& fa,
                           std::vector<std::complex<double>>& fb) {
    const std::size_t p = packed.size();
    fa.resize(p);
    fb.resize(p);
    for (std::size_t k = 0; k < p; ++k) {
        const auto mirrored = std::conj(packed[(p - k) & (p - 1)]);
        fa[k] = 0.5 * (packed[k] + mirrored);
        fb[k] = std::complex<double>(0.0, -0.5) * (packed[k] - mirrored);
    }
}

}  // namespace

Embedder::Embedder(flows::Flow flow, EmbeddingConfig cfg, ConvPath path, bool parallel_components)
    : flow_(std::move(flow)), cfg_(cfg), path_(path), parallel_(parallel_components) {
    cfg_.validate();
    kernel_weights_.reserve(static_cast<std::size_t>(cfg_.levels));
    for (int n = 1; n <= cfg_.levels; ++n)
        kernel_weights_.push_back(weighted_kernel(n, cfg_.tail, cfg_.step));

    if (path_ == ConvPath::Fast) {
        const auto samples = static_cast<std::size_t>(2 * grid_cells(cfg_.window, cfg_.step, "window")) + 1;
        padded_ = fft::next_pow2(samples + kernel_weights_.front().size() - 1);
        kernel_spectra_.reserve(kernel_weights_.size());
        for (const auto& wk : kernel_weights_)
            kernel_spectra_.push_back(fft::forward_real(wk, padded_));
    }
}

EmbeddedPoint Embedder::embed_trace(const SampledFunction& trace) const {
    if (trace.range() != RangeTag::UnitInterval)
        throw std::invalid_argument("embed_trace: traces live in the unit cube");
    const auto m = static_cast<int>(trace.components());

    const std::size_t klen = kernel_weights_.front().size();
    std::vector<std::vector<double>> comps;
    comps.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const auto sym = funcspace::affine_to_symmetric(
            trace.component_function(static_cast<std::size_t>(i)));
        comps.push_back(window_samples(sym, cfg_.window, cfg_.step));
    }
    const std::size_t out_len = comps.front().size() - klen + 1;

    // forward spectra shared across levels, two real components per transform
    std::vector<std::vector<std::complex<double>>> comp_spectra(static_cast<std::size_t>(m));
    if (path_ == ConvPath::Fast) {
        for (int i = 0; i < m; i += 2) {
            if (i + 1 < m) {
                std::vector<std::complex<double>> packed(padded_, {0.0, 0.0});
                const auto& a = comps[static_cast<std::size_t>(i)];
                const auto& b = comps[static_cast<std::size_t>(i + 1)];
                for (std::size_t j = 0; j < a.size(); ++j) packed[j] = {a[j], b[j]};
                fft::transform(packed, false);
                split_packed_spectrum(packed, comp_spectra[static_cast<std::size_t>(i)],
                                      comp_spectra[static_cast<std::size_t>(i + 1)]);
            } else {
                comp_spectra[static_cast<std::size_t>(i)] =
                    fft::forward_real(comps[static_cast<std::size_t>(i)], padded_);
            }
        }
    }

    // a task inverts one FFT and yields one or two components of a level
    struct Task {
        int n;
        int i;
        int i2;  // -1 when unpaired
    };
    std::vector<Task> tasks;
    for (int n = 1; n <= cfg_.levels; ++n) {
        const int cnt = std::min(n, m);
        for (int i = 1; i <= cnt; i += 2) tasks.push_back({n, i, i + 1 <= cnt ? i + 1 : -1});
    }

    auto run_task = [&](const Task& t) -> std::vector<ConvolvedFunction> {
        std::vector<ConvolvedFunction> done;
        const auto ns = static_cast<std::size_t>(t.n - 1);
        if (path_ == ConvPath::Direct) {
            done.push_back(assemble(
                convolve_direct(comps[static_cast<std::size_t>(t.i - 1)], kernel_weights_[ns], out_len),
                t.n, cfg_));
            if (t.i2 > 0)
                done.push_back(assemble(convolve_direct(comps[static_cast<std::size_t>(t.i2 - 1)],
                                                        kernel_weights_[ns], out_len),
                                        t.n, cfg_));
            return done;
        }
        const auto& kn = kernel_spectra_[ns];
        std::vector<std::complex<double>> prod(padded_);
        if (t.i2 > 0) {
            // pack the two real outputs as real/imag parts of one inverse FFT
            const auto& fa = comp_spectra[static_cast<std::size_t>(t.i - 1)];
            const auto& fb = comp_spectra[static_cast<std::size_t>(t.i2 - 1)];
            for (std::size_t k = 0; k < padded_; ++k)
                prod[k] = (fa[k] + std::complex<double>(0.0, 1.0) * fb[k]) * kn[k];
            fft::transform(prod, true);
            std::vector<double> ra(out_len);
            std::vector<double> rb(out_len);
            for (std::size_t k = 0; k < out_len; ++k) {
                ra[k] = prod[klen - 1 + k].real();
                rb[k] = prod[klen - 1 + k].imag();
            }
            done.push_back(assemble(std::move(ra), t.n, cfg_));
            done.push_back(assemble(std::move(rb), t.n, cfg_));
        } else {
            const auto& fa = comp_spectra[static_cast<std::size_t>(t.i - 1)];
            for (std::size_t k = 0; k < padded_; ++k) prod[k] = fa[k] * kn[k];
            fft::transform(prod, true);
            std::vector<double> ra(out_len);
            for (std::size_t k = 0; k < out_len; ++k) ra[k] = prod[klen - 1 + k].real();
            done.push_back(assemble(std::move(ra), t.n, cfg_));
        }
        return done;
    };

    std::vector<std::vector<ConvolvedFunction>> results;
    results.reserve(tasks.size());
    if (parallel_ && tasks.size() > 1) {
        std::vector<std::future<std::vector<ConvolvedFunction>>> futs;
        futs.reserve(tasks.size());
        for (const auto& t : tasks)
            futs.push_back(std::async(std::launch::async, [&run_task, t] { return run_task(t); }));
        for (auto& f : futs) results.push_back(f.get());
    } else {
        for (const auto& t : tasks) results.push_back(run_task(t));
    }

    EmbeddedPoint point;
    point.levels.resize(static_cast<std::size_t>(cfg_.levels));
    point.unit_levels.resize(static_cast<std::size_t>(cfg_.levels));
    std::size_t next = 0;
    for (const auto& task : tasks) {
        for (auto& conv : results[next]) {
            const auto ns = static_cast<std::size_t>(task.n - 1);
            point.unit_levels[ns].push_back(funcspace::affine_to_unit(conv.fn));
            point.levels[ns].push_back(std::move(conv));
        }
        ++next;
    }
    return point;
}

EmbeddedPoint Embedder::embed(const flows::Flow::State& x) const {
    return embed_trace(orbit_trace(flow_, x, cfg_));
}

EmbeddedPoint stage2_embed(const SampledFunction& trace, const EmbeddingConfig& cfg,
                           ConvPath path) {
    // the throwaway flow is never touched by embed_trace
    Embedder e(flows::make_torus_flow(), cfg, path, false);
    return e.embed_trace(trace);
}

EmbeddedPoint full_embed(const flows::Flow& flow, const flows::Flow::State& x,
                         const EmbeddingConfig& cfg, ConvPath path) {
    Embedder e(flow, cfg, path, false);
    return e.embed(x);
}

}  // namespace flowcube::embedding
