// Acceptance suite: drives the full verification stack end to end and prints
// one PASS/FAIL line per criterion.  Exit code is the number of failures.
//
// Criteria 1, 3, 5, 6 run through the CLI (`verify --suite all`) and are
// re-asserted here from the written report at their stated tolerances;
// criteria 2, 4, 7, 8, 9 run in-process.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "flowcube/cli.hpp"
#include "flowcube/embedding.hpp"
#include "flowcube/flows.hpp"
#include "flowcube/funcspace.hpp"
#include "flowcube/json_io.hpp"
#include "flowcube/kernels.hpp"
#include "flowcube/verify.hpp"

using namespace flowcube;
using embedding::ConvPath;
using embedding::EmbeddingConfig;
using flows::Flow;
using funcspace::RangeTag;
using funcspace::SampledFunction;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

int g_failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
    std::printf("[%d/9] %-36s %s%s%s\n", id, name.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.empty() ? "" : "  -- ", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const json* find_check(const json& report_json, const std::string& name) {
    for (const auto& c : report_json.at("checks")) {
        if (c.at("check_name") == name) return &c;
    }
    return nullptr;
}

double uniform01(std::mt19937_64& rng) { return flows::uniform01(rng); }

// --- criteria ---------------------------------------------------------------

json run_verify_all(Outcome& o) {
    const auto path =
        (std::filesystem::temp_directory_path() / "flowcube_acceptance_report.json").string();
    const int code = cli::dispatch({"verify", "--suite", "all", "--out", path});
    o.require(code == 0, "verify --suite all exited with code " + std::to_string(code));
    auto report_json = io::read_json_file(path);
    o.require(report_json.at("all_pass").get<bool>(), "report has failing checks");
    return report_json;
}

void criterion1_kernels(const json& rep) {
    Outcome o;
    for (const int n : {1, 2, 4, 8, 16}) {
        const std::string sfx = "_n" + std::to_string(n);
        const auto* nonneg = find_check(rep, "kernel_nonneg" + sfx);
        const auto* mass = find_check(rep, "kernel_mass" + sfx);
        const auto* inband = find_check(rep, "kernel_inband" + sfx);
        const auto* outband = find_check(rep, "kernel_outband" + sfx);
        o.require(nonneg && mass && inband && outband,
                  "missing kernel checks for n=" + std::to_string(n));
        if (!o.pass) break;
        o.require(nonneg->at("measured").get<double>() <= 0.0,
                  "sampled kernel min below zero at n=" + std::to_string(n));
        o.require(mass->at("pass").get<bool>(),
                  "mass outside tail+quadrature at n=" + std::to_string(n));
        for (const auto* t : {inband, outband}) {
            o.require(t->at("pass").get<bool>() && t->at("measured").get<double>() <= 1e-2,
                      "transform residual above 1e-2 at n=" + std::to_string(n));
        }
    }
    report(1, "kernel claim suite", o);
}

void criterion2_multiplier() {
    Outcome o;
    EmbeddingConfig cfg;
    cfg.levels = 2;
    cfg.window = 50.0;
    cfg.step = 1e-3;
    cfg.tail = 40.0;

    struct Case {
        double beta;
        int n;
    };
    std::string measured_list;
    for (const auto c : {Case{0.5, 1}, Case{0.25, 1}, Case{1.5, 2}, Case{1.0, 1}}) {
        const auto cells = static_cast<std::size_t>(std::llround(2.0 * cfg.window / cfg.step));
        const auto tone = SampledFunction::tabulate(
            -cfg.window, cfg.step, cells + 1, RangeTag::SymmetricUnit,
            [&](double x) { return std::cos(2.0 * kPi * c.beta * x); });
        const auto conv = embedding::convolve(tone, c.n, cfg, ConvPath::Fast);
        const double mult = kernels::tent(c.beta, c.n);
        double err = 0.0;
        for (std::size_t i = 0; i < conv.fn.size(); ++i) {
            const double x = conv.fn.start() + conv.fn.step() * static_cast<double>(i);
            err = std::max(err,
                           std::abs(conv.fn.value_at(i) - mult * std::cos(2.0 * kPi * c.beta * x)));
        }
        measured_list += (measured_list.empty() ? "" : ", ") + fmt(err);
        o.require(err <= 1e-4, "beta=" + fmt(c.beta) + " n=" + std::to_string(c.n) +
                                   " deviates by " + fmt(err) +
                                   " (> 1e-4; the beta = n tone resonates with the truncated "
                                   "kernel tail at level ~1/(2 pi^2 n A), which needs A >= ~507)");
    }
    if (o.pass) o.detail = "deviations: " + measured_list;
    report(2, "multiplier identity", o);
}

void criterion3_summability(const json& rep) {
    Outcome o;
    const auto* decreasing = find_check(rep, "summability_sinabs_decreasing");
    const auto* final_check = find_check(rep, "summability_sinabs_final");
    o.require(decreasing && final_check, "missing summability checks");
    if (o.pass) {
        o.require(decreasing->at("pass").get<bool>(), "error sequence is not strictly decreasing");
        const double last = final_check->at("measured").get<double>();
        o.require(final_check->at("pass").get<bool>() && last <= 0.032,
                  "final error " + fmt(last) + " above the pinned threshold 0.032");
        if (o.pass) o.detail = "final error " + fmt(last) + " <= 0.032";
    }
    report(3, "summability convergence", o);
}

void criterion4_flow_axioms() {
    Outcome o;
    std::mt19937_64 rng(verify::kDefaultSeed);
    double worst_closed = 0.0;
    double worst_susp = 0.0;
    for (const auto& name : flows::builtin_flow_names()) {
        const auto flow = flows::make_builtin_flow(name);
        const bool suspension = name.rfind("susp", 0) == 0;
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const auto x = flow.sample_state(rng);
            const double s = 10.0 * uniform01(rng) - 5.0;
            const double t = 10.0 * uniform01(rng) - 5.0;
            worst = std::max(worst,
                             flow.dist(flow.evolve(x, s + t), flow.evolve(flow.evolve(x, s), t)));
            worst = std::max(worst, flow.dist(flow.evolve(x, 0.0), x));
        }
        if (suspension)
            worst_susp = std::max(worst_susp, worst);
        else
            worst_closed = std::max(worst_closed, worst);
        o.require(worst <= (suspension ? 1e-6 : 1e-9),
                  name + std::string(" group-law residual ") + fmt(worst));
    }

    // unit-roof suspension against the torus flow through the fiber pair
    const auto susp = flows::make_builtin_flow("susp_const");
    const auto torus = flows::make_torus_flow();
    const double alpha = flows::default_alpha();
    double worst_consistency = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Flow::State st{uniform01(rng), uniform01(rng)};
        const double t = 20.0 * uniform01(rng) - 10.0;
        const auto moved = susp.evolve(st, t);
        const Flow::State lhs{flows::wrap_unit(moved[1]),
                              flows::wrap_unit(moved[0] + alpha * moved[1])};
        const auto rhs =
            torus.evolve({flows::wrap_unit(st[1]), flows::wrap_unit(st[0] + alpha * st[1])}, t);
        worst_consistency = std::max(worst_consistency, torus.dist(lhs, rhs));
    }
    o.require(worst_consistency <= 1e-9, "suspension-vs-torus residual " + fmt(worst_consistency));
    if (o.pass)
        o.detail = "closed-form " + fmt(worst_closed) + ", suspension " + fmt(worst_susp) +
                   ", consistency " + fmt(worst_consistency);
    report(4, "flow axioms", o);
}

void criterion5_equivariance(const json& rep) {
    Outcome o;
    for (const char* name : {"torus", "susp_cos", "fixed_circle"}) {
        const auto* c = find_check(rep, std::string("equivariance_") + name);
        o.require(c != nullptr, std::string("missing equivariance check for ") + name);
        if (!c) continue;
        o.require(c->at("pass").get<bool>(), std::string(name) + " exceeded the budget");
        o.require(c->at("bound").get<double>() <= 2e-3, "budget above 2e-3");
        const auto residuals = c->at("params").at("level_residuals").get<std::vector<double>>();
        const auto budgets = c->at("params").at("level_budgets").get<std::vector<double>>();
        for (std::size_t i = 0; i < residuals.size(); ++i) {
            o.require(residuals[i] <= budgets[i],
                      std::string(name) + " level " + std::to_string(i + 1) + " above its budget");
        }
        if (o.pass && std::string(name) == "torus")
            o.detail = "max residual " + fmt(c->at("measured").get<double>()) + " vs budget " +
                       fmt(c->at("bound").get<double>());
    }
    report(5, "embedding equivariance", o);
}

void criterion6_separation(const json& rep) {
    Outcome o;
    const auto* sep = find_check(rep, "separation_torus");
    const auto* ident = find_check(rep, "separation_identical_pair");
    o.require(sep && ident, "missing separation checks");
    if (o.pass) {
        const double margin = sep->at("params").at("margin").get<double>();
        const double refined = sep->at("params").at("margin_refined").get<double>();
        o.require(sep->at("pass").get<bool>(), "separation unstable or nonpositive");
        o.require(margin > 0.0, "margin not strictly positive");
        o.require(std::abs(margin - refined) <= 0.1 * std::min(margin, refined),
                  "margin moved more than 10% under grid refinement");
        o.require(ident->at("measured").get<double>() == 0.0, "identical pair separated");
        if (o.pass) o.detail = "min margin " + fmt(margin) + " (refined " + fmt(refined) + ")";
    }
    report(6, "separation margins", o);
}

void criterion7_metric_oracles() {
    Outcome o;
    const int k = 40;
    auto constant = [](double v, RangeTag r) {
        return SampledFunction::tabulate(-41.0, 1.0, 83, r, [v](double) { return v; });
    };
    const auto zero = constant(0.0, RangeTag::UnitInterval);
    const auto one = constant(1.0, RangeTag::UnitInterval);
    const auto d = funcspace::bebutov_metric(zero, one, {k});
    const double closed = 0.5 - std::ldexp(1.0, -(1 + k));
    o.require(d.value == closed, "double-sum metric of 0,1 constants not exactly 1/2 - 2^-41");

    double brute = 0.0;
    for (int nw = k; nw >= 1; --nw) brute += std::ldexp(1.0, -(1 + nw));
    o.require(std::abs(d.value - brute) <= 1e-15, "brute-force summation disagrees");

    const auto plus = constant(1.0, RangeTag::SymmetricUnit);
    const auto minus = constant(-1.0, RangeTag::SymmetricUnit);
    const auto b = funcspace::bernstein_metric(plus, minus, {k});
    const double closed_b = 2.0 * (1.0 - std::ldexp(1.0, -k));
    o.require(b.value == closed_b, "single-sum metric of +-1 constants not exactly 2(1 - 2^-40)");
    double brute_b = 0.0;
    for (int n = k; n >= 1; --n) brute_b += std::ldexp(2.0, -n);
    o.require(std::abs(b.value - brute_b) <= 1e-15, "brute-force summation disagrees (symmetric)");
    if (o.pass) o.detail = "exact dyadic values, oracle gap 0";
    report(7, "metric oracles", o);
}

void criterion8_dual_path() {
    Outcome o;
    EmbeddingConfig cfg;
    cfg.levels = 8;
    cfg.window = 30.0;
    cfg.step = 0.005;
    cfg.tail = 20.0;
    std::mt19937_64 rng(verify::kDefaultSeed + 8);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + trial % 8;
        // random band-limited input: five tones below frequency 2, sup <= 1
        std::vector<std::array<double, 3>> tones;
        double amp_total = 0.0;
        for (int j = 0; j < 5; ++j) {
            const double amp = 0.1 + uniform01(rng);
            amp_total += amp;
            tones.push_back({amp, 2.0 * uniform01(rng), 2.0 * kPi * uniform01(rng)});
        }
        const auto cells = static_cast<std::size_t>(std::llround(2.0 * cfg.window / cfg.step));
        const auto f = SampledFunction::tabulate(
            -cfg.window, cfg.step, cells + 1, RangeTag::SymmetricUnit, [&](double x) {
                double acc = 0.0;
                for (const auto& t : tones) acc += t[0] * std::cos(2.0 * kPi * t[1] * x + t[2]);
                return acc / amp_total;
            });
        const auto direct = embedding::convolve(f, n, cfg, ConvPath::Direct);
        const auto fast = embedding::convolve(f, n, cfg, ConvPath::Fast);
        double diff = 0.0;
        for (std::size_t i = 0; i < direct.fn.size(); ++i)
            diff = std::max(diff, std::abs(direct.fn.value_at(i) - fast.fn.value_at(i)));
        worst = std::max(worst, diff);
    }
    o.require(worst <= 1e-6, "paths diverge by " + fmt(worst));
    if (o.pass) o.detail = "max path difference " + fmt(worst);
    report(8, "convolution dual-path equivalence", o);
}

void criterion9_membership() {
    Outcome o;
    EmbeddingConfig cfg;
    cfg.levels = 8;
    cfg.window = 24.0;
    cfg.step = 0.005;
    cfg.tail = 16.0;
    for (const char* name : {"torus", "susp_cos"}) {
        const auto flow = flows::make_builtin_flow(name);
        std::mt19937_64 rng(verify::kDefaultSeed + 9);
        const auto point = embedding::full_embed(flow, flow.sample_state(rng), cfg);
        for (int n = 1; n <= cfg.levels; ++n) {
            const auto& level = point.levels[static_cast<std::size_t>(n - 1)];
            for (std::size_t i = 0; i < level.size(); ++i) {
                const auto& conv = level[i];
                o.require(conv.pre_clamp_sup <= 1.0 + conv.error_budget,
                          "pre-clamp sup above 1 + budget");
                const double residual = funcspace::band_limit_residual(
                    conv.fn, static_cast<double>(n), cfg.reliable_half_width());
                o.require(residual <= verify::band_residual_bound(cfg, n),
                          "band residual above the level bound at n=" + std::to_string(n));
                const auto& unit = point.unit_levels[static_cast<std::size_t>(n - 1)][i];
                for (std::size_t j = 0; j < unit.size(); ++j) {
                    const double v = unit.value_at(j);
                    o.require(v >= 0.0 && v <= 1.0, "affine view left [0,1]");
                }
            }
        }
    }
    if (o.pass) o.detail = "contraction, band certificates, affine range all hold";
    report(9, "range and membership certificates", o);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();

    Outcome suite;
    const json rep = run_verify_all(suite);
    if (!suite.pass) std::printf("verify --suite all FAILED -- %s\n", suite.detail.c_str());

    criterion1_kernels(rep);
    criterion2_multiplier();
    criterion3_summability(rep);
    criterion4_flow_axioms();
    criterion5_equivariance(rep);
    criterion6_separation(rep);
    criterion7_metric_oracles();
    criterion8_dual_path();
    criterion9_membership();

    const auto secs =
        std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0)
            .count();
    if (!suite.pass) ++g_failures;
    std::printf("%d/9 criteria passed in %llds%s\n", 9 - g_failures,
                static_cast<long long>(secs),
                g_failures ? " -- see README, section `Verification status`" : "");
    return g_failures;
}
