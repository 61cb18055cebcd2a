#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "cisim/runner.hpp"

namespace {

int threads_from_env() {
    const char* env = std::getenv("SIM_THREADS");
    if (!env || !*env) return 0;
    try {
        const int n = std::stoi(env);
        return n > 0 ? n : 0;
    } catch (const std::exception&) {
        std::cerr << "sim: ignoring SIM_THREADS='" << env << "'\n";
        return 0;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-boson conical intersection simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    bool have_seed = false;

    const std::map<std::string, std::pair<cisim::Subcommand, std::string>> commands{
        {"surface", {cisim::Subcommand::surface, "Adiabatic potential surfaces on a grid"}},
        {"evolve", {cisim::Subcommand::evolve, "Ramp evolution, final distribution and ratio curve"}},
        {"tomo", {cisim::Subcommand::tomo, "Fourier-push scan with shot noise and reconstruction"}},
        {"berry", {cisim::Subcommand::berry, "Geometric phase along a planar path"}},
        {"study", {cisim::Subcommand::study, "Adiabaticity, fidelity, Trotter convergence or CI control study"}},
    };
    for (const auto& [name, entry] : commands) {
        auto* sub = app.add_subcommand(name, entry.second);
        sub->add_option("--config", config_path, "INI config file")->required();
        sub->add_option("--seed", seed, "override run.seed");
        sub->add_option("--out", out_dir, "override output.dir");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    cisim::Subcommand cmd = cisim::Subcommand::evolve;
    for (const auto& [name, entry] : commands)
        if (app.got_subcommand(name)) {
            cmd = entry.first;
            have_seed = app.get_subcommand(name)->count("--seed") > 0;
        }

    try {
        cisim::set_worker_threads(threads_from_env());
        cisim::ExperimentConfig cfg = cisim::parse_config_file(config_path);
        if (have_seed) cfg.run.seed = seed;
        if (!out_dir.empty()) cfg.output.dir = out_dir;
        const cisim::RunReport report = cisim::run(cmd, cfg);
        std::cout << "wrote " << report.artifacts.size() << " files to " << report.dir << "\n"
                  << report.summary_json << "\n";
        return 0;
    } catch (const cisim::SimError& e) {
        std::cerr << "sim: " << e.what() << "\n";
        return cisim::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "sim: internal error: " << e.what() << "\n";
        return 1;
    }
}
