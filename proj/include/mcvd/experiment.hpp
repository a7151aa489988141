#pragma once

// Experiment descriptions, named presets, sweep execution and CSV output.
// Configuration files use µm, µm/s, µm²/s, ms and molecule counts; everything
// inside the library and in the CSV is SI.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcvd/optimizer.hpp"
#include "mcvd/simulator.hpp"

namespace mcvd {

enum class SweepVariable { TMax, Budget, Memory, PsiA };

std::string_view to_string(SweepVariable v);
SweepVariable parse_sweep_variable(std::string_view name);
/// CSV column name of the swept quantity, with its unit.
std::string_view sweep_column(SweepVariable v);

struct Sweep {
    SweepVariable variable = SweepVariable::TMax;
    std::vector<double> grid;  // SI (T_max in s); Q, U, ψ_A as counts
};

struct SimSettings {
    SimConfig config;
    bool empirical_thresholds = false;
};

struct Experiment {
    std::string name = "custom";
    Medium medium = Medium::MODE;
    Network network;
    Bounds bounds;
    int memory = 3;
    std::vector<Scheme> schemes{Scheme::STSN, Scheme::DTSN, Scheme::STDN, Scheme::DTDN};
    std::optional<Sweep> sweep;
    std::optional<SimSettings> sim;
    MomentMode mode = MomentMode::PaperExact;
    SolverConfig solver;

    /// Throws ConfigError when the base point or any sweep point is infeasible.
    void validate() const;
    /// Sweep values; a single base value when there is no sweep or the grid is empty.
    std::vector<double> points() const;
    SweepVariable sweep_variable() const { return sweep ? sweep->variable : SweepVariable::TMax; }
    /// Problem at one sweep value.
    Problem problem_at(double value) const;
};

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
Experiment preset(std::string_view name);

/// Applies a JSON configuration on top of `base`. A "preset" key in the
/// document replaces `base` with that preset first.
Experiment apply_config(const Experiment& base, std::string_view json_text);
Experiment load_config(const std::string& path, const std::optional<std::string>& preset_name);

/// Values from 10^log10(lo) to 10^log10(hi), inclusive, equally spaced in log.
std::vector<double> log_space(double lo, double hi, int points);

struct SchemeOutcome {
    Solution solution;
    std::optional<EmpiricalReport> sim;
};

struct ResultRow {
    double sweep_value = 0.0;
    std::vector<SchemeOutcome> schemes;  // same order as Experiment::schemes
};

/// Solves every sweep point (in parallel over points) and returns rows in
/// sweep order. Simulation seeds depend only on the seed and the point index.
std::vector<ResultRow> run_experiment(const Experiment& experiment, int threads);

inline constexpr std::string_view kCsvVersionLine = "# mcvd-csv v1";

void write_csv(std::ostream& out, const Experiment& experiment, const std::vector<ResultRow>& rows);

struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::optional<std::size_t> column(std::string_view name) const;
};

/// Throws ConfigError with the offending line number on malformed input.
CsvTable read_csv(std::istream& in);

/// gnuplot script that plots every "<scheme>_G" column against the first
/// column on a logarithmic BER axis, with error bars for simulated columns.
std::string plot_script(const CsvTable& table, const std::string& csv_path);

}  // namespace mcvd
