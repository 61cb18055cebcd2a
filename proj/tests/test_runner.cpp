#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "cisim/io.hpp"
#include "cisim/runner.hpp"
#include "support/expect_error.hpp"

using namespace cisim;
using cisim::test::error_of;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("cisim_runner_test_" + name);
    fs::remove_all(dir);
    return dir;
}

ExperimentConfig small_config(const fs::path& dir) {
    ExperimentConfig cfg;
    cfg.truncation.n_max_x = 8;
    cfg.truncation.n_max_y = 8;
    cfg.model.omega_khz = 2.0;
    cfg.schedule.rounds = 8;
    cfg.tomography.k_points = 15;
    cfg.tomography.grid_resolution = 41;
    cfg.tomography.shots = 50;
    cfg.berry.segments = 400;
    cfg.output.dir = dir.string();
    return cfg;
}

std::map<std::string, std::string> digests(const RunReport& r) {
    std::map<std::string, std::string> out;
    for (const auto& f : r.artifacts) out[f] = sha256_file((fs::path(r.dir) / f).string());
    return out;
}

}  // namespace

TEST_CASE("config text round-trips") {
    ExperimentConfig cfg;
    CHECK(parse_config_string(emit_config(cfg)) == cfg);

    cfg.model.omega_khz = 1.0 / 3.0;
    cfg.model.delta_khz = 0.1;
    cfg.schedule.scheme = TrotterScheme::strang;
    cfg.schedule.ramp = RampShape::staggered;
    cfg.noise.enabled = true;
    cfg.noise.number_y_per_s = 12.5;
    cfg.tomography.rotation_deg = -33.3;
    cfg.tomography.output_rotation_deg = 49.0;
    cfg.berry.path = BerryPathKind::shifted_loop;
    cfg.study.rounds_list = {3, 5};
    cfg.output.dir = "some/where";
    cfg.run.seed = 18446744073709551615ULL;
    CHECK(parse_config_string(emit_config(cfg)) == cfg);
}

TEST_CASE("partial configs fall back to defaults") {
    const auto cfg = parse_config_string("; comment\n[model]\nomega_khz = 4.5\n[schedule]\nscheme = mode_split\n");
    CHECK(cfg.model.omega_khz == 4.5);
    CHECK(cfg.schedule.scheme == TrotterScheme::mode_split);
    CHECK(cfg.truncation.n_max_x == 14);
    CHECK(cfg.model_params().omega == khz_to_rad_per_us(4.5));
    CHECK_THAT(khz_to_rad_per_us(3.0), Catch::Matchers::WithinRel(2.0 * std::numbers::pi * 3e-3, 1e-15));
}

TEST_CASE("bad configs are config errors") {
    for (const char* text : {"[model]\nomega = 1\n", "[nonsense]\nx = 1\n", "[model]\nnu_khz = fast\n",
                             "[schedule]\nscheme = magic\n", "[schedule]\nrounds = 0\n", "[model]\nnu_khz = -1\n",
                             "[noise]\nenabled = maybe\n", "[study]\nrounds_list = 4,x\n", "[model\n"})
        CHECK(error_of([&] { parse_config_string(text); }) == ErrorCode::ConfigError);
    CHECK(error_of([] { parse_config_file("/nonexistent/config.ini"); }) == ErrorCode::ConfigError);
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for(ErrorCode::ConfigError) == 2);
    CHECK(exit_code_for(ErrorCode::InvalidArgument) == 2);
    CHECK(exit_code_for(ErrorCode::TruncationLeak) == 3);
    CHECK(exit_code_for(ErrorCode::PositivityViolation) == 3);
    CHECK(exit_code_for(ErrorCode::TraceDrift) == 3);
    CHECK(exit_code_for(ErrorCode::ConvergenceFailure) == 3);
    CHECK(exit_code_for(ErrorCode::IoError) == 4);
}

TEST_CASE("SHA-256 digests") {
    const fs::path dir = scratch("sha");
    fs::create_directories(dir);
    write_text((dir / "abc.txt").string(), "abc");
    CHECK(sha256_file((dir / "abc.txt").string()) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(error_of([&] { sha256_file((dir / "missing").string()); }) == ErrorCode::IoError);
}

TEST_CASE("runs are reproducible and the manifest matches the files") {
    const fs::path a = scratch("tomo_a");
    const fs::path b = scratch("tomo_b");
    set_worker_threads(1);
    const RunReport ra = run(Subcommand::tomo, small_config(a));
    set_worker_threads(4);
    const RunReport rb = run(Subcommand::tomo, small_config(b));
    REQUIRE(ra.artifacts.back() == "manifest.json");

    auto da = digests(ra);
    auto db = digests(rb);
    // Manifests differ only through output.dir inside the embedded config.
    da.erase("manifest.json");
    db.erase("manifest.json");
    CHECK(da == db);

    const auto manifest = nlohmann::json::parse(read_text((a / "manifest.json").string()));
    CHECK(manifest["command"] == "tomo");
    CHECK(manifest["seed"] == 1);
    for (const auto& [name, digest] : da) CHECK(manifest["artifacts"][name] == digest);
    CHECK(manifest["pgm_scales"].contains("truth.pgm"));

    const SpatialGrid truth = read_grid_csv((a / "truth.csv").string());
    CHECK(truth.spec.resolution == 41);
    CHECK_THAT(truth.integral(), Catch::Matchers::WithinAbs(1.0, 1e-3));
    const FourierSamples s = read_samples((a / "samples_noisy_cos.csv").string(), (a / "samples_noisy_sin.csv").string(),
                                          (a / "samples_noisy.json").string());
    CHECK(s.shots == 50);
    CHECK(s.noisy);

    ExperimentConfig other = small_config(scratch("tomo_c"));
    other.run.seed = 2;
    const auto dc = digests(run(Subcommand::tomo, other));
    CHECK(dc.at("samples_noisy_cos.csv") != da.at("samples_noisy_cos.csv"));
    CHECK(dc.at("samples_exact_cos.csv") == da.at("samples_exact_cos.csv"));
}

TEST_CASE("berry and surface subcommands") {
    const auto berry = run(Subcommand::berry, small_config(scratch("berry")));
    const auto result = nlohmann::json::parse(read_text((fs::path(berry.dir) / "berry.json").string()));
    CHECK_THAT(result["plus"]["line_integral"].get<double>(), Catch::Matchers::WithinAbs(-std::numbers::pi, 1e-9));

    const auto surface = run(Subcommand::surface, small_config(scratch("surface")));
    const auto summary = nlohmann::json::parse(surface.summary_json);
    CHECK_THAT(summary["grid_ring_radius"].get<double>(),
               Catch::Matchers::WithinAbs(summary["analytic_ring_radius"].get<double>(), 0.1));
}

TEST_CASE("unwritable output directory is an I/O error") {
    const fs::path dir = scratch("blocked");
    fs::create_directories(dir);
    write_text((dir / "file").string(), "x");
    ExperimentConfig cfg = small_config(dir / "file" / "sub");
    CHECK(error_of([&] { run(Subcommand::berry, cfg); }) == ErrorCode::IoError);
}
