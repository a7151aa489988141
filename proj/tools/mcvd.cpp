// mcvd: optimize TDMA slot durations and molecule allocations, sweep
// parameters, cross-check against simulation and emit CSV / gnuplot scripts.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcvd/errors.hpp"
#include "mcvd/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

int report(int code, const char* kind, const std::string& message) {
    nlohmann::json j{{"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << j.dump() << '\n';
    return code;
}

int default_threads() {
    if (const char* env = std::getenv("MCVD_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) throw mcvd::ConfigError("MCVD_THREADS must be a positive integer");
        return static_cast<int>(v);
    }
    return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

// One JSON line on stderr per kind of warning, summarized over the run.
void warn_summary(const mcvd::Experiment& e, const std::vector<mcvd::ResultRow>& rows) {
    long clamped = 0, clamped_solutions = 0, capped = 0;
    for (const auto& row : rows) {
        for (const auto& o : row.schemes) {
            clamped += o.solution.clamped_terms;
            clamped_solutions += o.solution.clamped_terms > 0 ? 1 : 0;
            capped += o.solution.warning ? 1 : 0;
        }
    }
    if (clamped > 0) {
        nlohmann::json j{{"warning", "leak_clamped"},
                         {"solutions", clamped_solutions},
                         {"terms", clamped},
                         {"message", "negative leak-probability differences were clamped to 0 (see *_clamped columns)"}};
        std::cerr << j.dump() << '\n';
    }
    if (capped > 0) {
        nlohmann::json j{{"warning", "iteration_cap"},
                         {"solutions", capped},
                         {"message", "a 1D search hit max_1d_iters in " + e.name + " (see *_warning columns)"}};
        std::cerr << j.dump() << '\n';
    }
}

mcvd::Experiment load(const std::string& config, const std::optional<std::string>& preset) {
    if (config.empty()) {
        if (!preset) throw mcvd::ConfigError("a config file or --preset is required");
        return mcvd::preset(*preset);
    }
    return mcvd::load_config(config, preset);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Release scheduling and allocation for multi-transmitter diffusive molecular links"};
    app.require_subcommand(1);

    std::string config;
    std::optional<std::string> preset;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string moment_mode;
    std::optional<int> threads;

    auto* run = app.add_subcommand("run", "Solve every sweep point and write CSV");
    run->add_option("config", config, "JSON configuration (µm, ms, molecules)");
    run->add_option("--preset", preset, "Start from a named preset");
    run->add_option("--out", out, "CSV output file (default: stdout)");
    run->add_option("--seed", seed, "Simulation seed; required when the config has a sim section");
    run->add_option("--moment-mode", moment_mode, "Interference variance model")
        ->check(CLI::IsMember({"paper", "corrected"}));
    run->add_option("--threads", threads, "Worker threads (default: MCVD_THREADS or hardware)")
        ->check(CLI::PositiveNumber);

    std::string csv;
    std::string script_out;
    auto* plot = app.add_subcommand("plot", "Write a gnuplot script for a result CSV");
    plot->add_option("csv", csv, "CSV produced by 'mcvd run'")->required();
    plot->add_option("--out", script_out, "Script path (default: CSV path with .gp)");

    std::string validate_config;
    std::optional<std::string> validate_preset;
    auto* validate = app.add_subcommand("validate", "Check a configuration without solving");
    validate->add_option("config", validate_config, "JSON configuration")->required();
    validate->add_option("--preset", validate_preset, "Start from a named preset");

    app.add_subcommand("presets", "List preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return report(kExitConfig, "usage", e.what());
    }

    try {
        if (run->parsed()) {
            mcvd::Experiment e = load(config, preset);
            if (moment_mode == "paper") e.mode = mcvd::MomentMode::PaperExact;
            if (moment_mode == "corrected") e.mode = mcvd::MomentMode::CorrectedMixture;
            if (e.sim) {
                if (!seed) throw mcvd::ConfigError("--seed is required when the configuration has a sim section");
                e.sim->config.seed = *seed;
            }
            const int n_threads = threads ? *threads : default_threads();
            const auto rows = mcvd::run_experiment(e, n_threads);
            warn_summary(e, rows);
            if (out.empty()) {
                mcvd::write_csv(std::cout, e, rows);
            } else {
                std::ofstream f(out, std::ios::binary);
                if (!f) throw mcvd::ConfigError("cannot write '" + out + "'");
                mcvd::write_csv(f, e, rows);
                f.close();
                if (!f) throw mcvd::ConfigError("failed writing '" + out + "'");
                std::cout << "wrote " << rows.size() << " rows to " << out << '\n';
            }
        } else if (plot->parsed()) {
            std::ifstream in(csv);
            if (!in) throw mcvd::ConfigError("cannot open '" + csv + "'");
            const auto table = mcvd::read_csv(in);
            std::string path = script_out;
            if (path.empty()) {
                path = csv.ends_with(".csv") ? csv.substr(0, csv.size() - 4) : csv;
                path += ".gp";
            }
            std::ofstream f(path);
            if (!f) throw mcvd::ConfigError("cannot write '" + path + "'");
            f << mcvd::plot_script(table, csv);
            std::cout << "wrote " << path << '\n';
        } else if (validate->parsed()) {
            const mcvd::Experiment e = mcvd::load_config(validate_config, validate_preset);
            e.validate();
            nlohmann::json j{{"status", "ok"},
                             {"name", e.name},
                             {"points", e.points().size()},
                             {"transmitters", e.network.size()},
                             {"sim", e.sim.has_value()}};
            std::cout << j.dump() << '\n';
        } else {
            for (const auto& n : mcvd::preset_names()) std::cout << n << '\n';
        }
    } catch (const mcvd::NumericError& e) {
        return report(kExitNumeric, "numeric", e.what());
    } catch (const mcvd::ConfigError& e) {
        return report(kExitConfig, "config", e.what());
    } catch (const mcvd::InfeasibleError& e) {
        return report(kExitConfig, "infeasible", e.what());
    } catch (const mcvd::DomainError& e) {
        return report(kExitConfig, "domain", e.what());
    } catch (const std::exception& e) {
        return report(kExitNumeric, "internal", e.what());
    }
    return kExitOk;
}
