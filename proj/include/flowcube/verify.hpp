// Numerical certification engine: windowed Fourier transforms, the
// summability-kernel property checks, equivariance and separation audits,
// and machine-readable reports.
//
// Every report's bound comes from the documented formulas below (kernel
// tails, Poisson-image alias guards, convolution budgets, Richardson
// quadrature estimates); no bound is tuned to match a measurement.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "flowcube/embedding.hpp"
#include "flowcube/flows.hpp"
#include "flowcube/funcspace.hpp"

namespace flowcube::verify {

inline constexpr std::uint64_t kDefaultSeed = 20260808ULL;

/// Threshold for the final summability level of the |sin(pi x)| suite
/// signal, pinned before the implementation was written from the
/// Fourier-series corner oracle: the exact sup of |h*fejer_n - h| for
/// h = |sin(pi x)| sits at the integer corners and equals
///   (4/pi) * [ (1/(4n)) (2 O_n - 1 + 1/(2n+1)) + 1/(2(2n+1)) ],
/// O_n = sum_{k=1..n} 1/(2k-1),
/// which is 0.0304523... at n = 64; the threshold adds 5% sampling slack.
inline constexpr double kSinAbsCornerThreshold = 0.032;

/// One named check.  pass is always exactly (measured <= bound).
struct VerificationReport {
    std::string check_name;
    nlohmann::json params;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
    std::int64_t runtime_ms = 0;
};

VerificationReport make_report(std::string name, nlohmann::json params, double measured,
                               double bound, std::int64_t runtime_ms);

bool all_pass(const std::vector<VerificationReport>& reports);

/// Reports sorted by check_name and wrapped with the seed and the resolved
/// configuration echo, ready for serialization.
nlohmann::json reports_to_json(std::vector<VerificationReport> reports, std::uint64_t seed,
                               const nlohmann::json& config_echo);

/// Windowed transform sample: integral of f(t) e^{-2 pi i t xi} over the
/// stored window by trapezoid rule.  The window-truncation error needs decay
/// information about f that only the caller has; pass it to have it recorded,
/// otherwise the metadata reports the tail as unbounded.
struct FourierPoint {
    std::complex<double> value;
    bool tail_bounded = false;
    double tail_bound = 0.0;
};

FourierPoint numerical_fourier(const funcspace::SampledFunction& f, double xi,
                               std::optional<double> caller_tail_bound = std::nullopt);

/// Bound for comparing the windowed transform of a tabulated kernel against
/// its exact transform: the L1 tail 2/(pi^2 n W) uniformly bounds the window
/// truncation at every frequency, and the trapezoid-rule aliasing images are
/// each bounded by the same tail (first images dominate; the guard allows
/// three of them), plus a roundoff floor.
double transform_check_bound(int n, double window);

/// Certificate bound for the band-limit residual of an embedded level-n
/// component measured on the frequency grid with margin n/16 from the band
/// edge: a function bounded by 1 and exactly band-limited to [-n, n] has
/// windowed-transform magnitude at most 1/(pi (|xi| - n)) beyond the band
/// (geometric series of Bernstein-inequality boundary terms), hence
/// 16/(pi n) on the grid; the convolution budget eps accounts for the
/// component being band-limited only up to eps, adding 2 W' eps.
double band_residual_bound(const embedding::EmbeddingConfig& cfg, int n);

// ---------------------------------------------------------------------------
// checks

/// Four reports for kernel index n tabulated on [-W, W] at step 1/(8n):
/// nonnegativity (measured = -min sample, bound 0), unit mass (bound = tail
/// + Richardson quadrature estimate), in-band transform match, out-of-band
/// transform residual on n < |xi| <= 2n (both bounded by
/// transform_check_bound).
std::vector<VerificationReport> check_kernel_properties(int n, double window);

/// Convolves `signal` with fejer_n for each requested level and measures the
/// sup error on [-N, N].  Emits one informational report per level (bound:
/// codomain diameter), a strict-decrease report over consecutive levels, and
/// a final-level report against `threshold`.
std::vector<VerificationReport> check_summability(const funcspace::SampledFunction& signal,
                                                  const std::string& signal_name,
                                                  const std::vector<int>& levels,
                                                  double eval_radius, double threshold,
                                                  const embedding::EmbeddingConfig& cfg);

/// Max residual of |embed(evolve(x, r)) - shift(embed(x), r)| over states x,
/// shifts r, and all (level, component) pairs, measured on [-E, E].
/// measured = the worst absolute residual; bound = level_budget(1), the
/// worst-level budget.  Per-level maxima and budgets are recorded in params.
VerificationReport check_equivariance(const flows::Flow& flow,
                                      const std::vector<flows::Flow::State>& states,
                                      const std::vector<double>& shifts,
                                      const embedding::EmbeddingConfig& cfg, double eval_radius);

/// Separation margin of a list of state pairs: per pair the max over
/// (level, component) of the sup distance on [-E, E]; the margin is the min
/// over pairs.  Passing requires a strictly positive margin that is stable
/// under grid refinement h -> h/2: measured = |margin_h - margin_h/2| with
/// bound = 0.1 * min(margins) when both margins are positive, and a failing
/// sentinel otherwise.  Margins and the first separating level go to params.
VerificationReport check_separation(const flows::Flow& flow,
                                    const std::vector<std::pair<flows::Flow::State, flows::Flow::State>>& pairs,
                                    const embedding::EmbeddingConfig& cfg, double eval_radius);

// ---------------------------------------------------------------------------
// suites (CLI-facing, defaults are the certification-grade parameters)

struct VerifySuiteConfig {
    std::uint64_t seed = kDefaultSeed;

    std::vector<int> kernel_ns{1, 2, 4, 8, 16};
    double kernel_window = 400.0;

    std::vector<int> summability_ns{4, 8, 16, 32, 64};
    double summability_radius = 5.0;  // N: errors measured on [-N, N]
    double summability_tail = 30.0;   // A
    double summability_step = 1.0 / 512.0;
    double summability_threshold = kSinAbsCornerThreshold;

    embedding::EmbeddingConfig equivariance_cfg{8, 160.0, 0.005, 150.0, 40};
    std::vector<std::string> equivariance_flows{"torus", "susp_cos", "fixed_circle"};
    std::size_t equivariance_states = 20;
    std::vector<double> equivariance_shifts{0.37, -1.2, 2.0};
    double equivariance_eval_radius = 8.0;

    embedding::EmbeddingConfig separation_cfg{4, 24.0, 0.005, 16.0, 40};
    std::size_t separation_pairs = 50;
    double separation_min_dist = 1e-2;
    double separation_eval_radius = 8.0;

    static VerifySuiteConfig from_json(const nlohmann::json& overrides);
    nlohmann::json to_json() const;
};

/// Seeded states / pairs used by the audit suites.
std::vector<flows::Flow::State> sample_states(const flows::Flow& flow, std::size_t count,
                                              std::uint64_t seed);
std::vector<std::pair<flows::Flow::State, flows::Flow::State>> sample_torus_pairs(
    std::size_t count, double min_dist, std::uint64_t seed);

std::vector<VerificationReport> run_kernel_suite(const VerifySuiteConfig& cfg);
std::vector<VerificationReport> run_summability_suite(const VerifySuiteConfig& cfg);
std::vector<VerificationReport> run_equivariance_suite(const VerifySuiteConfig& cfg);
std::vector<VerificationReport> run_separation_suite(const VerifySuiteConfig& cfg);

/// suite is one of kernels | summability | equivariance | separation | all.
std::vector<VerificationReport> run_suite(const std::string& suite, const VerifySuiteConfig& cfg);

}  // namespace flowcube::verify
