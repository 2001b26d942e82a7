#include "flowcube/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>

#include "flowcube/kernels.hpp"

namespace flowcube::verify {

using embedding::ConvPath;
using embedding::EmbeddingConfig;
using flows::Flow;
using funcspace::RangeTag;
using funcspace::SampledFunction;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

class Stopwatch {
public:
    std::int64_t ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - begin_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point begin_ = std::chrono::steady_clock::now();
};

}  // namespace

VerificationReport make_report(std::string name, json params, double measured, double bound,
                               std::int64_t runtime_ms) {
    VerificationReport r;
    r.check_name = std::move(name);
    r.params = std::move(params);
    r.measured = measured;
    r.bound = bound;
    r.pass = measured <= bound;
    r.runtime_ms = runtime_ms;
    return r;
}

bool all_pass(const std::vector<VerificationReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

json reports_to_json(std::vector<VerificationReport> reports, std::uint64_t seed,
                     const json& config_echo) {
    std::sort(reports.begin(), reports.end(),
              [](const auto& a, const auto& b) { return a.check_name < b.check_name; });
    json arr = json::array();
    for (const auto& r : reports) {
        arr.push_back(json{{"check_name", r.check_name},
                           {"params", r.params},
                           {"measured", r.measured},
                           {"bound", r.bound},
                           {"pass", r.pass},
                           {"runtime_ms", r.runtime_ms}});
    }
    return json{{"seed", seed},
                {"config", config_echo},
                {"all_pass", all_pass(reports)},
                {"checks", std::move(arr)}};
}

FourierPoint numerical_fourier(const SampledFunction& f, double xi,
                               std::optional<double> caller_tail_bound) {
    if (f.components() != 1)
        throw std::invalid_argument("numerical_fourier: requires single-component function");
    std::complex<double> acc{0.0, 0.0};
    const std::size_t last = f.size() - 1;
    for (std::size_t i = 0; i <= last; ++i) {
        const double t = f.start() + f.step() * static_cast<double>(i);
        const double w = (i == 0 || i == last) ? 0.5 : 1.0;
        const double ang = -2.0 * kPi * t * xi;
        acc += w * f.value_at(i) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    FourierPoint out;
    out.value = acc * f.step();
    out.tail_bounded = caller_tail_bound.has_value();
    out.tail_bound = caller_tail_bound.value_or(0.0);
    return out;
}

double transform_check_bound(int n, double window) {
    const double tail = kernels::tail_mass_bound(n, window);
    return tail + 3.0 * tail + 1e-9;
}

double band_residual_bound(const EmbeddingConfig& cfg, int n) {
    const double edge_leak = 16.0 / (kPi * static_cast<double>(n));
    const double half_width = cfg.reliable_half_width();
    return edge_leak + 2.0 * half_width * cfg.level_budget(n);
}

std::vector<VerificationReport> check_kernel_properties(int n, double window) {
    std::vector<VerificationReport> out;
    const double h = kernels::default_step(n);
    const double tail = kernels::tail_mass_bound(n, window);
    const std::string suffix = "_n" + std::to_string(n);

    {  // nonnegativity of the sampled kernel
        Stopwatch sw;
        double min_val = kernels::fejer(0.0, n);
        const auto cells = static_cast<long long>(std::llround(2.0 * window / h));
        for (long long j = 0; j <= cells; ++j)
            min_val = std::min(min_val, kernels::fejer(-window + h * static_cast<double>(j), n));
        out.push_back(make_report("kernel_nonneg" + suffix,
                                  json{{"n", n}, {"window", window}, {"step", h}, {"min", min_val}},
                                  -min_val, 0.0, sw.ms()));
    }
    {  // unit mass up to tail + quadrature (Richardson at h and h/2)
        Stopwatch sw;
        const auto m1 = kernels::kernel_mass(n, window, h);
        const auto m2 = kernels::kernel_mass(n, window, h / 2.0);
        const double richardson = (4.0 / 3.0) * std::abs(m1.mass - m2.mass);
        out.push_back(make_report(
            "kernel_mass" + suffix,
            json{{"n", n}, {"window", window}, {"step", h}, {"mass", m1.mass},
                 {"tail_bound", m1.tail_bound}, {"quad_richardson", richardson}},
            std::abs(m1.mass - 1.0), m1.tail_bound + richardson + 1e-12, sw.ms()));
    }
    {
        Stopwatch sw;
        // transform computed on the unit-normalized tabulation (fejer_n / n is
        // [0,1]-valued) and rescaled back by linearity
        const auto cells = static_cast<std::size_t>(std::llround(2.0 * window / h));
        const auto normalized = SampledFunction::tabulate(
            -window, h, cells + 1, RangeTag::UnitInterval,
            [n](double x) { return kernels::fejer(x, n) / static_cast<double>(n); });

        double inband = 0.0;
        for (int j = -16; j <= 16; ++j) {
            const double xi = static_cast<double>(n) * static_cast<double>(j) / 16.0;
            const auto nf = numerical_fourier(normalized, xi, tail);
            inband = std::max(inband, std::abs(nf.value * static_cast<double>(n) -
                                               kernels::fourier_of_fejer(n, xi)));
        }
        out.push_back(make_report("kernel_inband" + suffix,
                                  json{{"n", n}, {"window", window}, {"step", h}, {"xi_points", 33}},
                                  inband, transform_check_bound(n, window), sw.ms()));

        Stopwatch sw2;
        double outband = 0.0;
        for (int j = 1; j <= 16; ++j) {
            const double xi = static_cast<double>(n) * (1.0 + static_cast<double>(j) / 16.0);
            for (const double s : {xi, -xi}) {
                const auto nf = numerical_fourier(normalized, s, tail);
                outband = std::max(outband, std::abs(nf.value) * static_cast<double>(n));
            }
        }
        out.push_back(make_report("kernel_outband" + suffix,
                                  json{{"n", n}, {"window", window}, {"step", h}, {"xi_points", 32}},
                                  outband, transform_check_bound(n, window), sw2.ms()));
    }
    return out;
}

std::vector<VerificationReport> check_summability(const SampledFunction& signal,
                                                  const std::string& signal_name,
                                                  const std::vector<int>& levels,
                                                  double eval_radius, double threshold,
                                                  const EmbeddingConfig& cfg) {
    if (levels.empty()) throw std::invalid_argument("check_summability: need at least one level");
    if (cfg.reliable_half_width() < eval_radius - 1e-9)
        throw std::invalid_argument("check_summability: reliable window smaller than [-N, N]");
    if (!signal.covers(-cfg.window, cfg.window))
        throw std::invalid_argument("check_summability: signal window must cover [-(N+A), N+A]");

    std::vector<VerificationReport> out;
    std::vector<double> errors;
    for (const int n : levels) {
        Stopwatch sw;
        const auto conv = embedding::convolve(signal, n, cfg, ConvPath::Fast);
        const double err = funcspace::sup_dist(conv.fn, signal, eval_radius, 0);
        errors.push_back(err);
        // diameter sanity bound: |h * fejer_n - h| <= 1 for [0,1]-valued h, up
        // to the certified convolution budget
        out.push_back(make_report(
            "summability_" + signal_name + "_n" + std::to_string(n),
            json{{"n", n}, {"eval_radius", eval_radius}, {"conv_budget", conv.error_budget}},
            err, 1.0 + conv.error_budget, sw.ms()));
    }

    {
        double worst_step = -1.0;  // max consecutive difference; decreasing => negative
        for (std::size_t k = 0; k + 1 < errors.size(); ++k)
            worst_step = std::max(worst_step, errors[k + 1] - errors[k]);
        // strictness margin 1e-9 is a roundoff floor, far below the expected
        // inter-level gaps (order 1e-2)
        out.push_back(make_report("summability_" + signal_name + "_decreasing",
                                  json{{"errors", errors}, {"levels", levels}}, worst_step, -1e-9,
                                  0));
    }
    out.push_back(make_report("summability_" + signal_name + "_final",
                              json{{"n", levels.back()}, {"threshold", threshold}}, errors.back(),
                              threshold, 0));
    return out;
}

VerificationReport check_equivariance(const Flow& flow, const std::vector<Flow::State>& states,
                                      const std::vector<double>& shifts,
                                      const EmbeddingConfig& cfg, double eval_radius) {
    Stopwatch sw;
    for (const double r : shifts) {
        if (std::abs(r) > cfg.reliable_half_width() - eval_radius + 1e-9)
            throw std::invalid_argument(
                "check_equivariance: |r| must be <= (W - A) - E for the windows to overlap");
    }

    const embedding::Embedder embedder(flow, cfg, ConvPath::Fast, false);

    auto state_worst = [&](const Flow::State& x) {
        std::vector<double> level_max(static_cast<std::size_t>(cfg.levels), 0.0);
        const auto base = embedder.embed(x);
        for (const double r : shifts) {
            const auto moved = embedder.embed(flow.evolve(x, r));
            for (std::size_t n = 0; n < base.levels.size(); ++n) {
                for (std::size_t i = 0; i < base.levels[n].size(); ++i) {
                    const double res = funcspace::sup_dist(
                        moved.levels[n][i].fn, base.levels[n][i].fn.shifted(r), eval_radius, 0);
                    level_max[n] = std::max(level_max[n], res);
                }
            }
        }
        return level_max;
    };

    // parallel across states; deterministic fold in state order
    std::vector<std::future<std::vector<double>>> futs;
    futs.reserve(states.size());
    for (const auto& x : states)
        futs.push_back(std::async(std::launch::async, [&state_worst, &x] { return state_worst(x); }));

    std::vector<double> level_residuals(static_cast<std::size_t>(cfg.levels), 0.0);
    for (auto& f : futs) {
        const auto lm = f.get();
        for (std::size_t n = 0; n < level_residuals.size(); ++n)
            level_residuals[n] = std::max(level_residuals[n], lm[n]);
    }

    std::vector<double> level_budgets;
    for (int n = 1; n <= cfg.levels; ++n) level_budgets.push_back(cfg.level_budget(n));

    const double measured = *std::max_element(level_residuals.begin(), level_residuals.end());
    return make_report("equivariance_" + flow.name(),
                       json{{"flow", flow.name()},
                            {"states", states.size()},
                            {"shifts", shifts},
                            {"eval_radius", eval_radius},
                            {"level_residuals", level_residuals},
                            {"level_budgets", level_budgets}},
                       measured, level_budgets.front(), sw.ms());
}

namespace {

/// max over (level, component) of the sup distance between two embeddings;
/// first_level reports the first level whose separation exceeds its own
/// error budget (separation below the budget could be quadrature dust)
double embedding_margin(const embedding::EmbeddedPoint& a, const embedding::EmbeddedPoint& b,
                        double eval_radius, const EmbeddingConfig& cfg, int* first_level) {
    double margin = 0.0;
    if (first_level) *first_level = 0;
    for (std::size_t n = 0; n < a.levels.size(); ++n) {
        for (std::size_t i = 0; i < a.levels[n].size(); ++i) {
            const double d =
                funcspace::sup_dist(a.levels[n][i].fn, b.levels[n][i].fn, eval_radius, 0);
            if (first_level && *first_level == 0 &&
                d > cfg.level_budget(static_cast<int>(n) + 1))
                *first_level = static_cast<int>(n) + 1;
            margin = std::max(margin, d);
        }
    }
    return margin;
}

double separation_margin(const Flow& flow,
                         const std::vector<std::pair<Flow::State, Flow::State>>& pairs,
                         const EmbeddingConfig& cfg, double eval_radius, int* worst_first_level) {
    const embedding::Embedder embedder(flow, cfg, ConvPath::Fast, false);

    std::vector<std::future<std::pair<double, int>>> futs;
    futs.reserve(pairs.size());
    for (const auto& pr : pairs) {
        futs.push_back(std::async(std::launch::async, [&embedder, &pr, &cfg, eval_radius] {
            int first = 0;
            const double m = embedding_margin(embedder.embed(pr.first), embedder.embed(pr.second),
                                              eval_radius, cfg, &first);
            return std::pair{m, first};
        }));
    }
    double min_margin = std::numeric_limits<double>::infinity();
    int worst_level = 0;
    for (auto& f : futs) {
        const auto [m, first] = f.get();
        min_margin = std::min(min_margin, m);
        worst_level = std::max(worst_level, first);
    }
    if (worst_first_level) *worst_first_level = worst_level;
    return min_margin;
}

}  // namespace

VerificationReport check_separation(const Flow& flow,
                                    const std::vector<std::pair<Flow::State, Flow::State>>& pairs,
                                    const EmbeddingConfig& cfg, double eval_radius) {
    Stopwatch sw;
    if (pairs.empty()) throw std::invalid_argument("check_separation: need at least one pair");

    int worst_level = 0;
    const double margin = separation_margin(flow, pairs, cfg, eval_radius, &worst_level);

    EmbeddingConfig refined = cfg;
    refined.step = cfg.step / 2.0;
    const double margin_refined = separation_margin(flow, pairs, refined, eval_radius, nullptr);

    // pass requires both margins strictly positive and agreement within 10%
    double measured;
    double bound;
    if (margin > 0.0 && margin_refined > 0.0) {
        measured = std::abs(margin - margin_refined);
        bound = 0.1 * std::min(margin, margin_refined);
    } else {
        measured = 1.0;  // failing sentinel: no positive margin to stabilize
        bound = 0.0;
    }
    return make_report("separation_" + flow.name(),
                       json{{"flow", flow.name()},
                            {"pairs", pairs.size()},
                            {"eval_radius", eval_radius},
                            {"margin", margin},
                            {"margin_refined", margin_refined},
                            {"worst_first_separating_level", worst_level}},
                       measured, bound, sw.ms());
}

// ---------------------------------------------------------------------------

VerifySuiteConfig VerifySuiteConfig::from_json(const json& overrides) {
    VerifySuiteConfig cfg;
    if (overrides.is_null()) return cfg;
    if (!overrides.is_object())
        throw std::invalid_argument("verify config overrides must be a JSON object");

    auto maybe = [&](const char* key, auto& slot) {
        if (overrides.contains(key)) slot = overrides.at(key).get<std::decay_t<decltype(slot)>>();
    };
    maybe("seed", cfg.seed);
    maybe("kernel_ns", cfg.kernel_ns);
    maybe("kernel_window", cfg.kernel_window);
    maybe("summability_ns", cfg.summability_ns);
    maybe("summability_radius", cfg.summability_radius);
    maybe("summability_tail", cfg.summability_tail);
    maybe("summability_step", cfg.summability_step);
    maybe("summability_threshold", cfg.summability_threshold);
    maybe("equivariance_flows", cfg.equivariance_flows);
    maybe("equivariance_states", cfg.equivariance_states);
    maybe("equivariance_shifts", cfg.equivariance_shifts);
    maybe("equivariance_eval_radius", cfg.equivariance_eval_radius);
    maybe("separation_pairs", cfg.separation_pairs);
    maybe("separation_min_dist", cfg.separation_min_dist);
    maybe("separation_eval_radius", cfg.separation_eval_radius);

    auto maybe_embedding = [&](const char* key, EmbeddingConfig& slot) {
        if (!overrides.contains(key)) return;
        const auto& j = overrides.at(key);
        if (j.contains("levels")) slot.levels = j.at("levels").get<int>();
        if (j.contains("window")) slot.window = j.at("window").get<double>();
        if (j.contains("step")) slot.step = j.at("step").get<double>();
        if (j.contains("tail")) slot.tail = j.at("tail").get<double>();
        if (j.contains("depth")) slot.metric_depth = j.at("depth").get<int>();
    };
    maybe_embedding("equivariance_cfg", cfg.equivariance_cfg);
    maybe_embedding("separation_cfg", cfg.separation_cfg);
    return cfg;
}

nlohmann::json VerifySuiteConfig::to_json() const {
    auto embed_json = [](const EmbeddingConfig& e) {
        return json{{"levels", e.levels},
                    {"window", e.window},
                    {"step", e.step},
                    {"tail", e.tail},
                    {"depth", e.metric_depth}};
    };
    return json{{"seed", seed},
                {"kernel_ns", kernel_ns},
                {"kernel_window", kernel_window},
                {"summability_ns", summability_ns},
                {"summability_radius", summability_radius},
                {"summability_tail", summability_tail},
                {"summability_step", summability_step},
                {"summability_threshold", summability_threshold},
                {"equivariance_cfg", embed_json(equivariance_cfg)},
                {"equivariance_flows", equivariance_flows},
                {"equivariance_states", equivariance_states},
                {"equivariance_shifts", equivariance_shifts},
                {"equivariance_eval_radius", equivariance_eval_radius},
                {"separation_cfg", embed_json(separation_cfg)},
                {"separation_pairs", separation_pairs},
                {"separation_min_dist", separation_min_dist},
                {"separation_eval_radius", separation_eval_radius}};
}

std::vector<Flow::State> sample_states(const Flow& flow, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ std::hash<std::string>{}(flow.name()));
    std::vector<Flow::State> states;
    states.reserve(count);
    for (std::size_t i = 0; i < count; ++i) states.push_back(flow.sample_state(rng));
    return states;
}

std::vector<std::pair<Flow::State, Flow::State>> sample_torus_pairs(std::size_t count,
                                                                    double min_dist,
                                                                    std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::pair<Flow::State, Flow::State>> pairs;
    pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x0 = flows::uniform01(rng);
        const double x1 = flows::uniform01(rng);
        // offset radius in [min_dist, 0.3], well inside the injectivity
        // radius of the flat torus, so the pair distance is exactly rho
        const double rho = min_dist + (0.3 - min_dist) * flows::uniform01(rng);
        const double phi = 2.0 * kPi * flows::uniform01(rng);
        pairs.push_back({Flow::State{x0, x1},
                         Flow::State{flows::wrap_unit(x0 + rho * std::cos(phi)),
                                     flows::wrap_unit(x1 + rho * std::sin(phi))}});
    }
    return pairs;
}

std::vector<VerificationReport> run_kernel_suite(const VerifySuiteConfig& cfg) {
    std::vector<VerificationReport> out;
    for (const int n : cfg.kernel_ns) {
        auto reports = check_kernel_properties(n, cfg.kernel_window);
        out.insert(out.end(), std::make_move_iterator(reports.begin()),
                   std::make_move_iterator(reports.end()));
    }
    return out;
}

std::vector<VerificationReport> run_summability_suite(const VerifySuiteConfig& cfg) {
    const double span = cfg.summability_radius + cfg.summability_tail;
    const auto cells = static_cast<std::size_t>(std::llround(2.0 * span / cfg.summability_step));
    const auto signal = SampledFunction::tabulate(
        -span, cfg.summability_step, cells + 1, RangeTag::UnitInterval,
        [](double x) { return std::abs(std::sin(kPi * x)); });

    EmbeddingConfig conv_cfg;
    conv_cfg.levels = *std::max_element(cfg.summability_ns.begin(), cfg.summability_ns.end());
    conv_cfg.window = span;
    conv_cfg.step = cfg.summability_step;
    conv_cfg.tail = cfg.summability_tail;
    return check_summability(signal, "sinabs", cfg.summability_ns, cfg.summability_radius,
                             cfg.summability_threshold, conv_cfg);
}

std::vector<VerificationReport> run_equivariance_suite(const VerifySuiteConfig& cfg) {
    std::vector<VerificationReport> out;
    for (const auto& name : cfg.equivariance_flows) {
        const auto flow = flows::make_builtin_flow(name);
        const auto states = sample_states(flow, cfg.equivariance_states, cfg.seed);
        out.push_back(check_equivariance(flow, states, cfg.equivariance_shifts,
                                         cfg.equivariance_cfg, cfg.equivariance_eval_radius));
    }
    return out;
}

std::vector<VerificationReport> run_separation_suite(const VerifySuiteConfig& cfg) {
    std::vector<VerificationReport> out;
    const auto flow = flows::make_torus_flow();
    const auto pairs = sample_torus_pairs(cfg.separation_pairs, cfg.separation_min_dist, cfg.seed);
    out.push_back(check_separation(flow, pairs, cfg.separation_cfg, cfg.separation_eval_radius));

    {  // identical states embed to identical points: margin is exactly zero
        Stopwatch sw;
        const embedding::Embedder embedder(flow, cfg.separation_cfg, ConvPath::Fast, false);
        const Flow::State x{0.3125, 0.6875};
        const double margin = embedding_margin(embedder.embed(x), embedder.embed(x),
                                               cfg.separation_eval_radius, cfg.separation_cfg,
                                               nullptr);
        out.push_back(make_report("separation_identical_pair", json{{"state", x}}, margin, 0.0,
                                  sw.ms()));
    }
    return out;
}

std::vector<VerificationReport> run_suite(const std::string& suite, const VerifySuiteConfig& cfg) {
    std::vector<VerificationReport> out;
    auto append = [&out](std::vector<VerificationReport> reports) {
        out.insert(out.end(), std::make_move_iterator(reports.begin()),
                   std::make_move_iterator(reports.end()));
    };
    if (suite == "kernels" || suite == "all") append(run_kernel_suite(cfg));
    if (suite == "summability" || suite == "all") append(run_summability_suite(cfg));
    if (suite == "equivariance" || suite == "all") append(run_equivariance_suite(cfg));
    if (suite == "separation" || suite == "all") append(run_separation_suite(cfg));
    if (out.empty()) throw std::invalid_argument("unknown verify suite: " + suite);
    return out;
}

}  // namespace flowcube::verify
