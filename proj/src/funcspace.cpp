#include "flowcube/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace flowcube::funcspace {

namespace {

constexpr double kGridSlack = 1e-9;
constexpr double kCodomainSlack = 1e-12;

std::pair<double, double> codomain(RangeTag tag) {
    return tag == RangeTag::UnitInterval ? std::pair{0.0, 1.0} : std::pair{-1.0, 1.0};
}

}  // namespace

std::string to_string(RangeTag tag) {
    return tag == RangeTag::UnitInterval ? "unit" : "symmetric";
}

RangeTag range_tag_from_string(const std::string& s) {
    if (s == "unit") return RangeTag::UnitInterval;
    if (s == "symmetric") return RangeTag::SymmetricUnit;
    throw std::invalid_argument("unknown range tag: " + s);
}

SampledFunction::SampledFunction(double start, double step, std::size_t components,
                                 std::vector<double> flat_values, RangeTag range)
    : start_(start), step_(step), components_(components), range_(range),
      values_(std::move(flat_values)) {
    if (step_ <= 0.0) throw std::invalid_argument("SampledFunction: step must be positive");
    if (components_ == 0) throw std::invalid_argument("SampledFunction: need at least one component");
    if (values_.size() % components_ != 0)
        throw std::invalid_argument("SampledFunction: flat value count not divisible by components");
    size_ = values_.size() / components_;
    if (size_ < 2) throw std::invalid_argument("SampledFunction: window length must be positive (need >= 2 samples)");

    const auto [lo, hi] = codomain(range_);
    for (auto& v : values_) {
        if (v < lo - kCodomainSlack || v > hi + kCodomainSlack)
            throw std::invalid_argument("SampledFunction: value outside declared codomain");
        v = std::clamp(v, lo, hi);
    }
}

SampledFunction SampledFunction::from_rows(double start, double step,
                                           const std::vector<std::vector<double>>& rows,
                                           RangeTag range) {
    if (rows.empty()) throw std::invalid_argument("SampledFunction: no samples");
    const std::size_t m = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * m);
    for (const auto& row : rows) {
        if (row.size() != m) throw std::invalid_argument("SampledFunction: ragged sample rows");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return SampledFunction(start, step, m, std::move(flat), range);
}

SampledFunction SampledFunction::tabulate(double start, double step, std::size_t count,
                                          RangeTag range,
                                          const std::function<double(double)>& fn) {
    std::vector<double> flat(count);
    for (std::size_t i = 0; i < count; ++i) flat[i] = fn(start + step * static_cast<double>(i));
    return SampledFunction(start, step, 1, std::move(flat), range);
}

SampledFunction SampledFunction::tabulate_vector(
    double start, double step, std::size_t count, std::size_t components, RangeTag range,
    const std::function<void(double, std::vector<double>&)>& fn) {
    std::vector<double> flat(count * components);
    std::vector<double> row(components);
    for (std::size_t i = 0; i < count; ++i) {
        fn(start + step * static_cast<double>(i), row);
        std::copy(row.begin(), row.end(), flat.begin() + static_cast<std::ptrdiff_t>(i * components));
    }
    return SampledFunction(start, step, components, std::move(flat), range);
}

bool SampledFunction::covers(double lo, double hi) const {
    return start_ <= lo + kGridSlack && end() >= hi - kGridSlack;
}

double SampledFunction::value_at(std::size_t index, std::size_t component) const {
    if (index >= size_) throw std::out_of_range("SampledFunction: sample index out of range");
    if (component >= components_) throw std::out_of_range("SampledFunction: component out of range");
    return values_[index * components_ + component];
}

double SampledFunction::eval(double x, std::size_t component) const {
    if (component >= components_) throw std::out_of_range("SampledFunction: component out of range");
    const double pos = (x - start_) / step_;
    if (pos <= 0.0) return values_[component];  // clamp-to-endpoint policy
    const double last = static_cast<double>(size_ - 1);
    if (pos >= last) return values_[(size_ - 1) * components_ + component];

    auto i = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(i);
    // snap to the grid so grid points evaluate to stored samples exactly
    if (frac < kGridSlack) frac = 0.0;
    if (frac > 1.0 - kGridSlack) {
        ++i;
        frac = 0.0;
    }
    const double a = values_[i * components_ + component];
    if (frac == 0.0) return a;
    const double b = values_[(i + 1) * components_ + component];
    return a + frac * (b - a);
}

SampledFunction SampledFunction::shifted(double r) const {
    SampledFunction out = *this;
    out.start_ = start_ - r;
    return out;
}

SampledFunction SampledFunction::component_function(std::size_t component) const {
    if (component >= components_) throw std::out_of_range("SampledFunction: component out of range");
    std::vector<double> flat(size_);
    for (std::size_t i = 0; i < size_; ++i) flat[i] = values_[i * components_ + component];
    return SampledFunction(start_, step_, 1, std::move(flat), range_);
}

void MetricTruncation::validate() const {
    if (depth < 1) throw std::invalid_argument("MetricTruncation: depth must be >= 1");
}

double sup_dist(const SampledFunction& f, const SampledFunction& g, double n_window,
                std::size_t component) {
    if (n_window <= 0.0) throw std::invalid_argument("sup_dist: window radius must be positive");
    if (f.components() != g.components())
        throw std::invalid_argument("sup_dist: component count mismatch");
    if (component >= f.components()) throw std::out_of_range("sup_dist: component out of range");
    if (!f.covers(-n_window, n_window) || !g.covers(-n_window, n_window))
        throw std::invalid_argument("sup_dist: window does not cover [-N, N]");

    auto probe = [&](double x) { return std::abs(f.eval(x, component) - g.eval(x, component)); };

    double best = std::max(probe(-n_window), probe(n_window));

    auto sweep = [&](const SampledFunction& s) {
        const auto first =
            static_cast<long long>(std::ceil((-n_window - s.start()) / s.step() - kGridSlack));
        const auto last =
            static_cast<long long>(std::floor((n_window - s.start()) / s.step() + kGridSlack));
        for (long long i = std::max(first, 0LL);
             i <= std::min(last, static_cast<long long>(s.size()) - 1); ++i) {
            best = std::max(best, probe(s.start() + s.step() * static_cast<double>(i)));
        }
    };
    sweep(f);
    sweep(g);
    return best;
}

MetricValue bebutov_metric(const SampledFunction& f, const SampledFunction& g,
                           MetricTruncation trunc) {
    trunc.validate();
    if (f.range() != RangeTag::UnitInterval || g.range() != RangeTag::UnitInterval)
        throw std::invalid_argument("bebutov_metric: requires unit-interval range");
    if (f.components() != g.components())
        throw std::invalid_argument("bebutov_metric: component count mismatch");
    const int k = trunc.depth;
    if (!f.covers(-k, k) || !g.covers(-k, k))
        throw std::invalid_argument("bebutov_metric: windows must cover [-K, K]");

    const auto m = static_cast<int>(f.components());
    const int n0 = std::min(m, k);

    MetricValue out;
    for (int n = 1; n <= n0; ++n) {
        for (int nw = 1; nw <= k; ++nw) {
            const double sup = sup_dist(f, g, nw, static_cast<std::size_t>(n - 1));
            out.value += sup * std::ldexp(1.0, -(n + nw));
        }
    }
    // omitted terms: N > K for the computed components, and (if m > K) whole
    // components K < n <= m; sups replaced by the diameter 1
    const double comp_weight = 1.0 - std::ldexp(1.0, -n0);
    out.error_bound = comp_weight * std::ldexp(1.0, -k);
    if (m > k) out.error_bound += std::ldexp(1.0, -k) - std::ldexp(1.0, -m);
    return out;
}

MetricValue bernstein_metric(const SampledFunction& f, const SampledFunction& g,
                             MetricTruncation trunc) {
    trunc.validate();
    if (f.range() != RangeTag::SymmetricUnit || g.range() != RangeTag::SymmetricUnit)
        throw std::invalid_argument("bernstein_metric: requires symmetric-unit range");
    if (f.components() != 1 || g.components() != 1)
        throw std::invalid_argument("bernstein_metric: requires single-component functions");
    const int k = trunc.depth;
    if (!f.covers(-k, k) || !g.covers(-k, k))
        throw std::invalid_argument("bernstein_metric: windows must cover [-K, K]");

    MetricValue out;
    for (int n = 1; n <= k; ++n) {
        out.value += sup_dist(f, g, n, 0) * std::ldexp(1.0, -n);
    }
    out.error_bound = std::ldexp(2.0, -k);
    return out;
}

double band_limit_residual(const SampledFunction& f, double band, double window) {
    if (band <= 0.0) throw std::invalid_argument("band_limit_residual: band must be positive");
    if (f.components() != 1)
        throw std::invalid_argument("band_limit_residual: requires single-component function");
    if (!f.covers(-window, window))
        throw std::invalid_argument("band_limit_residual: window not covered by samples");

    // trapezoid transform restricted to the sub-grid inside [-W, W]
    const auto first =
        static_cast<long long>(std::ceil((-window - f.start()) / f.step() - kGridSlack));
    const auto last =
        static_cast<long long>(std::floor((window - f.start()) / f.step() + kGridSlack));
    const auto i0 = static_cast<std::size_t>(std::max(first, 0LL));
    const auto i1 = static_cast<std::size_t>(
        std::min(last, static_cast<long long>(f.size()) - 1));
    if (i1 <= i0) throw std::invalid_argument("band_limit_residual: degenerate window");

    auto windowed_transform = [&](double xi) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = i0; i <= i1; ++i) {
            const double t = f.start() + f.step() * static_cast<double>(i);
            const double w = (i == i0 || i == i1) ? 0.5 : 1.0;
            const double ang = -2.0 * std::numbers::pi * t * xi;
            acc += w * f.value_at(i) * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        return std::abs(acc) * f.step();
    };

    double worst = 0.0;
    for (int j = 1; j <= 16; ++j) {
        const double xi = band + static_cast<double>(j) * band / 16.0;
        worst = std::max(worst, windowed_transform(xi));
        worst = std::max(worst, windowed_transform(-xi));
    }
    return worst;
}

SampledFunction affine_to_unit(const SampledFunction& f) {
    if (f.range() != RangeTag::SymmetricUnit)
        throw std::invalid_argument("affine_to_unit: expects symmetric-unit range");
    std::vector<double> flat = f.flat_values();
    for (auto& v : flat) v = (v + 1.0) / 2.0;
    return SampledFunction(f.start(), f.step(), f.components(), std::move(flat),
                           RangeTag::UnitInterval);
}

SampledFunction affine_to_symmetric(const SampledFunction& f) {
    if (f.range() != RangeTag::UnitInterval)
        throw std::invalid_argument("affine_to_symmetric: expects unit-interval range");
    std::vector<double> flat = f.flat_values();
    for (auto& v : flat) v = 2.0 * v - 1.0;
    return SampledFunction(f.start(), f.step(), f.components(), std::move(flat),
                           RangeTag::SymmetricUnit);
}

}  // namespace flowcube::funcspace
