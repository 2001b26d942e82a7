#include "flowcube/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "flowcube/embedding.hpp"
#include "flowcube/flows.hpp"
#include "flowcube/funcspace.hpp"
#include "flowcube/json_io.hpp"
#include "flowcube/kernels.hpp"
#include "flowcube/verify.hpp"

namespace flowcube::cli {

namespace {

using nlohmann::json;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("FLOWCUBE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw CLI::ValidationError("FLOWCUBE_SEED must be an unsigned integer");
        }
    }
    return verify::kDefaultSeed;
}

std::vector<double> parse_state_csv(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw CLI::ValidationError("--state expects comma-separated numbers");
    return out;
}

std::string sidecar_path(const std::string& emit) {
    if (emit.size() > 4 && emit.substr(emit.size() - 4) == ".csv")
        return emit.substr(0, emit.size() - 4) + ".json";
    return emit + ".json";
}

int run_kernel(int n, double window, double step, const std::string& emit, std::uint64_t seed) {
    kernels::KernelSpec spec{n, window, step};
    spec.validate();

    std::ofstream csv(emit);
    if (!csv) throw std::runtime_error("cannot open for writing: " + emit);
    csv << "x,phi\n";
    const auto cells = static_cast<long long>(std::ceil(2.0 * window / step - 1e-9));
    const double h = 2.0 * window / static_cast<double>(cells);
    for (long long j = 0; j <= cells; ++j) {
        const double x = -window + h * static_cast<double>(j);
        csv << x << ',' << kernels::fejer(x, n) << '\n';
    }
    csv.close();

    const auto mass = kernels::kernel_mass(n, window, step);
    const json config{{"subcommand", "kernel"}, {"n", n},       {"window", window},
                      {"step", step},           {"emit", emit}, {"seed", seed}};
    io::write_json_file(sidecar_path(emit), json{{"n", n},
                                                 {"window", window},
                                                 {"step", step},
                                                 {"mass", mass.mass},
                                                 {"tail_bound", mass.tail_bound},
                                                 {"seed", seed},
                                                 {"config", config}});
    std::cout << json{{"mass", mass.mass}, {"tail_bound", mass.tail_bound}}.dump() << '\n';
    return 0;
}

int run_flow(const std::string& name, const std::string& state_csv, double t,
             std::uint64_t seed) {
    const auto flow = flows::make_builtin_flow(name);
    const auto state = parse_state_csv(state_csv);
    const auto evolved = flow.evolve(state, t);
    const json config{{"subcommand", "flow"}, {"name", name}, {"state", state}, {"t", t},
                      {"seed", seed}};
    std::cout << json{{"flow", name},
                      {"state", state},
                      {"t", t},
                      {"evolved", evolved},
                      {"coords", flow.coords(evolved)},
                      {"config", config}}
                     .dump()
              << '\n';
    return 0;
}

int run_metric(const std::string& kind, const std::string& f_path, const std::string& g_path,
               int depth, std::uint64_t seed) {
    const auto f = io::load_sampled_function(f_path);
    const auto g = io::load_sampled_function(g_path);
    const funcspace::MetricTruncation trunc{depth};

    funcspace::MetricValue mv;
    if (kind == "bebutov") {
        mv = funcspace::bebutov_metric(f, g, trunc);
    } else if (kind == "bernstein") {
        mv = funcspace::bernstein_metric(f, g, trunc);
    } else {
        throw CLI::ValidationError("--kind must be bebutov or bernstein");
    }
    const json config{{"subcommand", "metric"}, {"kind", kind},   {"f", f_path},
                      {"g", g_path},            {"depth", depth}, {"seed", seed}};
    std::cout << json{{"value", mv.value}, {"error_bound", mv.error_bound}, {"config", config}}
                     .dump()
              << '\n';
    return 0;
}

int run_embed(const std::string& flow_name, const std::string& state_csv,
              const embedding::EmbeddingConfig& cfg, const std::string& out_dir,
              std::uint64_t seed) {
    cfg.validate();
    const auto flow = flows::make_builtin_flow(flow_name);
    const auto state = parse_state_csv(state_csv);

    const embedding::Embedder embedder(flow, cfg, embedding::ConvPath::Fast, true);
    const auto point = embedder.embed(state);

    std::filesystem::create_directories(out_dir);
    const json config{{"subcommand", "embed"},
                      {"flow", flow_name},
                      {"state", state},
                      {"levels", cfg.levels},
                      {"window", cfg.window},
                      {"step", cfg.step},
                      {"tail", cfg.tail},
                      {"depth", cfg.metric_depth},
                      {"seed", seed}};

    json manifest{{"config", config}, {"seed", seed}, {"flow", flow_name}, {"state", state}};
    json levels = json::array();
    for (std::size_t n = 1; n <= point.levels.size(); ++n) {
        json level{{"n", n}, {"error_budget", cfg.level_budget(static_cast<int>(n))}};
        json comps = json::array();
        for (std::size_t i = 1; i <= point.levels[n - 1].size(); ++i) {
            const auto& conv = point.levels[n - 1][i - 1];
            const std::string file =
                "level_" + std::to_string(n) + "_component_" + std::to_string(i) + ".json";
            io::save_sampled_function((std::filesystem::path(out_dir) / file).string(), conv.fn,
                                      config);
            comps.push_back(json{
                {"i", i},
                {"file", file},
                {"pre_clamp_sup", conv.pre_clamp_sup},
                {"clamp_excess", conv.clamp_excess},
                {"band_limit_residual",
                 funcspace::band_limit_residual(conv.fn, static_cast<double>(n),
                                                cfg.reliable_half_width())},
                {"band_residual_bound", verify::band_residual_bound(cfg, static_cast<int>(n))}});
        }
        level["components"] = std::move(comps);
        levels.push_back(std::move(level));
    }
    manifest["levels"] = std::move(levels);
    io::write_json_file((std::filesystem::path(out_dir) / "manifest.json").string(), manifest);
    std::cout << "wrote " << out_dir << "/manifest.json\n";
    return 0;
}

int run_verify(const std::string& suite, const std::string& config_path,
               const std::string& out_path, std::optional<std::uint64_t> seed_flag) {
    // seed precedence: --seed flag, then an explicit config-file seed, then
    // FLOWCUBE_SEED, then the built-in default
    verify::VerifySuiteConfig cfg;
    bool seed_from_config = false;
    if (!config_path.empty()) {
        const auto overrides = io::read_json_file(config_path);
        cfg = verify::VerifySuiteConfig::from_json(overrides);
        seed_from_config = overrides.is_object() && overrides.contains("seed");
    }
    if (seed_flag) cfg.seed = *seed_flag;
    else if (!seed_from_config) cfg.seed = resolve_seed(std::nullopt);

    auto reports = verify::run_suite(suite, cfg);
    std::sort(reports.begin(), reports.end(),
              [](const auto& a, const auto& b) { return a.check_name < b.check_name; });
    for (const auto& r : reports) {
        std::printf("%-44s measured %12.6g  bound %12.6g  %s\n", r.check_name.c_str(), r.measured,
                    r.bound, r.pass ? "PASS" : "FAIL");
    }
    const bool ok = verify::all_pass(reports);

    if (!out_path.empty()) {
        json echo = cfg.to_json();
        echo["subcommand"] = "verify";
        echo["suite"] = suite;
        io::write_json_file(out_path, verify::reports_to_json(std::move(reports), cfg.seed, echo));
    }
    std::printf("%s\n", ok ? "all checks passed" : "CHECK FAILURES PRESENT");
    return ok ? 0 : 1;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"flowcube: certified band-limited embeddings of compact flows"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed_flag;

    // kernel
    auto* kernel = app.add_subcommand("kernel", "tabulate a kernel and its mass accounting");
    int k_n = 1;
    double k_window = 400.0;
    double k_step = 0.0;
    std::string k_emit;
    kernel->add_option("--n", k_n, "kernel index")->required();
    kernel->add_option("--window", k_window, "tabulation half-window");
    kernel->add_option("--step", k_step, "grid step (default 1/(8n))");
    kernel->add_option("--emit", k_emit, "output CSV path (sidecar JSON written next to it)")
        ->required();

    // flow
    auto* flow = app.add_subcommand("flow", "evolve a built-in flow state");
    std::string f_name;
    std::string f_state;
    double f_t = 0.0;
    flow->add_option("--name", f_name, "flow name")->required();
    flow->add_option("--state", f_state, "comma-separated state")->required();
    flow->add_option("--t", f_t, "time")->required();

    // metric
    auto* metric = app.add_subcommand("metric", "truncated metric between two sampled functions");
    std::string m_kind;
    std::string m_f;
    std::string m_g;
    int m_depth = 40;
    metric->add_option("--kind", m_kind, "bebutov | bernstein")->required();
    metric->add_option("--f", m_f, "first function JSON")->required();
    metric->add_option("--g", m_g, "second function JSON")->required();
    metric->add_option("--depth", m_depth, "truncation depth K");

    // embed
    auto* embed = app.add_subcommand("embed", "embed a flow state and write the components");
    std::string e_flow;
    std::string e_state;
    embedding::EmbeddingConfig e_cfg;
    std::string e_out;
    embed->add_option("--flow", e_flow, "flow name")->required();
    embed->add_option("--state", e_state, "comma-separated state")->required();
    embed->add_option("--levels", e_cfg.levels, "truncation level L");
    embed->add_option("--window", e_cfg.window, "trace half-window W");
    embed->add_option("--step", e_cfg.step, "grid step h");
    embed->add_option("--tail", e_cfg.tail, "convolution tail radius A");
    embed->add_option("--out", e_out, "output directory")->required();

    // verify
    auto* ver = app.add_subcommand("verify", "run certification suites");
    std::string v_suite;
    std::string v_config;
    std::string v_out;
    ver->add_option("--suite", v_suite, "kernels | summability | equivariance | separation | all")
        ->required();
    ver->add_option("--config", v_config, "JSON file with suite overrides");
    ver->add_option("--out", v_out, "report JSON path");

    for (auto* sub : {kernel, flow, metric, embed, ver})
        sub->add_option("--seed", seed_flag, "seed override (beats FLOWCUBE_SEED)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);

        const std::uint64_t seed = resolve_seed(seed_flag);
        if (kernel->parsed()) {
            if (k_step <= 0.0) k_step = kernels::default_step(k_n);
            return run_kernel(k_n, k_window, k_step, k_emit, seed);
        }
        if (flow->parsed()) return run_flow(f_name, f_state, f_t, seed);
        if (metric->parsed()) return run_metric(m_kind, m_f, m_g, m_depth, seed);
        if (embed->parsed()) return run_embed(e_flow, e_state, e_cfg, e_out, seed);
        if (ver->parsed()) return run_verify(v_suite, v_config, v_out, seed_flag);
        return 2;
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n' << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace flowcube::cli
