#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "flowcube/cli.hpp"
#include "flowcube/embedding.hpp"
#include "flowcube/flows.hpp"
#include "flowcube/funcspace.hpp"
#include "flowcube/json_io.hpp"
#include "flowcube/kernels.hpp"
#include "flowcube/verify.hpp"

using namespace flowcube;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / "flowcube_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string write_constant_function(const std::string& name, double value, double lo, double hi,
                                    double step, funcspace::RangeTag range) {
    const auto count = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
    const auto f = funcspace::SampledFunction::tabulate(lo, step, count, range,
                                                        [value](double) { return value; });
    const auto path = (scratch_dir() / name).string();
    io::save_sampled_function(path, f, json{{"origin", "test"}});
    return path;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("usage errors exit with code 2") {
    CHECK(cli::dispatch({}) == 2);
    CHECK(cli::dispatch({"frobnicate"}) == 2);
    CHECK(cli::dispatch({"embed", "--state", "0,0"}) == 2);          // missing --flow
    CHECK(cli::dispatch({"metric", "--kind", "bernstein"}) == 2);    // missing files
    CHECK(cli::dispatch({"kernel", "--n", "0", "--emit", "x"}) == 2);
    CHECK(cli::dispatch({"metric", "--kind", "nope", "--f", "a", "--g", "b"}) == 2);
    CHECK(cli::dispatch({"--help"}) == 0);
}

TEST_CASE("kernel subcommand emits CSV plus a JSON sidecar") {
    const auto csv_path = (scratch_dir() / "k1.csv").string();
    CHECK(cli::dispatch({"kernel", "--n", "1", "--window", "50", "--emit", csv_path}) == 0);

    std::ifstream csv(csv_path);
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "x,phi");

    const auto sidecar = io::read_json_file((scratch_dir() / "k1.json").string());
    CHECK(sidecar.at("n") == 1);
    CHECK(std::abs(sidecar.at("mass").get<double>() - 1.0) <= 2.1e-3);
    CHECK(sidecar.at("tail_bound").get<double>() ==
          doctest::Approx(kernels::tail_mass_bound(1, 50.0)));
    CHECK(sidecar.at("config").at("subcommand") == "kernel");
    CHECK(sidecar.contains("seed"));
}

TEST_CASE("flow subcommand runs") {
    CHECK(cli::dispatch({"flow", "--name", "torus", "--state", "0,0", "--t", "1.0"}) == 0);
    CHECK(cli::dispatch({"flow", "--name", "nope", "--state", "0,0", "--t", "1.0"}) == 2);
    CHECK(cli::dispatch({"flow", "--name", "torus", "--state", "oops", "--t", "1"}) == 2);
}

TEST_CASE("metric subcommand: identical files give zero") {
    const auto a = write_constant_function("const_a.json", 0.25, -41.0, 41.0, 1.0,
                                           funcspace::RangeTag::UnitInterval);
    CHECK(cli::dispatch({"metric", "--kind", "bebutov", "--f", a, "--g", a, "--depth", "40"}) == 0);
    const auto s = write_constant_function("const_s.json", -0.5, -41.0, 41.0, 1.0,
                                           funcspace::RangeTag::SymmetricUnit);
    CHECK(cli::dispatch({"metric", "--kind", "bernstein", "--f", s, "--g", s, "--depth", "40"}) ==
          0);
    // insufficient window is a usage error
    const auto small = write_constant_function("const_small.json", 0.25, -2.0, 2.0, 1.0,
                                               funcspace::RangeTag::UnitInterval);
    CHECK(cli::dispatch({"metric", "--kind", "bebutov", "--f", small, "--g", small}) == 2);
}

TEST_CASE("embed writes components that round-trip exactly") {
    const auto out_dir = (scratch_dir() / "embed_out").string();
    CHECK(cli::dispatch({"embed", "--flow", "torus", "--state", "0.2,0.7", "--levels", "2",
                         "--window", "12", "--step", "0.005", "--tail", "8", "--out", out_dir}) ==
          0);

    const auto manifest = io::read_json_file(out_dir + "/manifest.json");
    CHECK(manifest.at("flow") == "torus");
    CHECK(manifest.at("config").at("subcommand") == "embed");
    REQUIRE(manifest.at("levels").size() == 2);
    CHECK(manifest.at("levels")[1].at("components").size() == 2);

    // files re-read by the metric machinery reproduce the in-process values
    embedding::EmbeddingConfig cfg;
    cfg.levels = 2;
    cfg.window = 12.0;
    cfg.step = 0.005;
    cfg.tail = 8.0;
    const auto point = embedding::full_embed(flows::make_torus_flow(), {0.2, 0.7}, cfg);
    for (int n = 1; n <= 2; ++n) {
        for (int i = 1; i <= std::min(n, 4); ++i) {
            const auto loaded = io::load_sampled_function(
                out_dir + "/level_" + std::to_string(n) + "_component_" + std::to_string(i) +
                ".json");
            const auto& direct = point.at(n, i).fn;
            REQUIRE(loaded.size() == direct.size());
            for (std::size_t j = 0; j < loaded.size(); ++j)
                CHECK(loaded.value_at(j) == direct.value_at(j));  // bit-exact round trip

            const auto in_process =
                funcspace::bernstein_metric(direct, direct, funcspace::MetricTruncation{4});
            const auto from_files =
                funcspace::bernstein_metric(loaded, loaded, funcspace::MetricTruncation{4});
            CHECK(in_process.value == from_files.value);
        }
    }
}

TEST_CASE("verify subcommand writes a report and reflects failures in the exit code") {
    const auto cfg_path = (scratch_dir() / "verify_cfg.json").string();
    const auto report_path = (scratch_dir() / "report.json").string();
    io::write_json_file(cfg_path, json{{"kernel_ns", {1}}, {"kernel_window", 50.0}});

    CHECK(cli::dispatch({"verify", "--suite", "kernels", "--config", cfg_path, "--out",
                         report_path}) == 0);
    const auto report = io::read_json_file(report_path);
    CHECK(report.at("all_pass") == true);
    CHECK(report.at("checks").size() == 4);
    CHECK(report.at("config").at("suite") == "kernels");
    CHECK(report.at("seed").get<std::uint64_t>() == verify::kDefaultSeed);

    // an unreachable threshold makes the suite fail honestly: exit code 1
    const auto strict_cfg = (scratch_dir() / "strict.json").string();
    io::write_json_file(strict_cfg, json{{"summability_ns", {4, 8}},
                                         {"summability_threshold", 1e-9}});
    CHECK(cli::dispatch({"verify", "--suite", "summability", "--config", strict_cfg}) == 1);
}

TEST_CASE("seed resolution: flag beats environment beats default") {
    const auto report_path = (scratch_dir() / "seeded.json").string();
    const auto cfg_path = (scratch_dir() / "tiny.json").string();
    io::write_json_file(cfg_path, json{{"kernel_ns", {1}}, {"kernel_window", 50.0}});

    setenv("FLOWCUBE_SEED", "4242", 1);
    CHECK(cli::dispatch({"verify", "--suite", "kernels", "--config", cfg_path, "--out",
                         report_path}) == 0);
    CHECK(io::read_json_file(report_path).at("seed").get<std::uint64_t>() == 4242);

    CHECK(cli::dispatch({"verify", "--suite", "kernels", "--config", cfg_path, "--out",
                         report_path, "--seed", "7"}) == 0);
    CHECK(io::read_json_file(report_path).at("seed").get<std::uint64_t>() == 7);
    unsetenv("FLOWCUBE_SEED");
}

TEST_SUITE_END();
