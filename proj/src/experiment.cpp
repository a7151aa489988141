#include "mcvd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "mcvd/errors.hpp"
#include "mcvd/parallel.hpp"
#include "mcvd/reference.hpp"

namespace mcvd {

using nlohmann::json;

std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::TMax: return "T_max";
        case SweepVariable::Budget: return "Q";
        case SweepVariable::Memory: return "U";
        case SweepVariable::PsiA: return "psi_A";
    }
    return "?";
}

SweepVariable parse_sweep_variable(std::string_view name) {
    if (name == "T_max") return SweepVariable::TMax;
    if (name == "Q") return SweepVariable::Budget;
    if (name == "U") return SweepVariable::Memory;
    if (name == "psi_A") return SweepVariable::PsiA;
    throw ConfigError("unknown sweep variable '" + std::string(name) + "' (expected T_max, Q, U or psi_A)");
}

std::string_view sweep_column(SweepVariable v) {
    switch (v) {
        case SweepVariable::TMax: return "T_max_s";
        case SweepVariable::Budget: return "Q_molecules";
        case SweepVariable::Memory: return "U_frames";
        case SweepVariable::PsiA: return "psi_A_molecules";
    }
    return "?";
}

std::vector<double> log_space(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi >= lo) || points < 1) throw ConfigError("log_space: requires 0 < lo <= hi and points >= 1");
    std::vector<double> out;
    if (points == 1) return {lo};
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < points; ++i) {
        out.push_back(i == 0 ? lo : i == points - 1 ? hi : std::pow(10.0, a + (b - a) * i / (points - 1)));
    }
    return out;
}

Problem Experiment::problem_at(double value) const {
    Problem p{network, bounds, memory, mode};
    switch (sweep_variable()) {
        case SweepVariable::TMax: p.bounds.t_max = value; break;
        case SweepVariable::Budget: p.bounds.budget = value; break;
        case SweepVariable::Memory: p.memory = static_cast<int>(value); break;
        case SweepVariable::PsiA: p.bounds.psi_a = value; break;
    }
    return p;
}

std::vector<double> Experiment::points() const {
    if (sweep && !sweep->grid.empty()) return sweep->grid;
    switch (sweep_variable()) {
        case SweepVariable::TMax: return {bounds.t_max};
        case SweepVariable::Budget: return {bounds.budget};
        case SweepVariable::Memory: return {static_cast<double>(memory)};
        case SweepVariable::PsiA: return {bounds.psi_a};
    }
    return {};
}

void Experiment::validate() const {
    try {
        network.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (schemes.empty()) throw ConfigError("no schemes selected");
    if (std::set<Scheme>(schemes.begin(), schemes.end()).size() != schemes.size()) {
        throw ConfigError("duplicate scheme in selection");
    }
    if (!(solver.coord_tol > 0.0 && solver.coord_tol < 0.5) || !(solver.obj_tol > 0.0) ||
        solver.max_outer_iters < 1 || solver.max_1d_iters < 1) {
        throw ConfigError("solver: requires 0 < coord_tol < 0.5, obj_tol > 0 and iteration limits >= 1");
    }
    if (sim) sim->config.validate();
    for (double v : points()) {
        if (sweep_variable() == SweepVariable::Memory && (v != std::floor(v) || v < 0.0)) {
            throw ConfigError("sweep over U requires non-negative integers");
        }
        const Problem p = problem_at(v);
        if (p.memory < 0) throw ConfigError("memory length U must be >= 0");
        try {
            p.bounds.validate(network.size());
        } catch (const InfeasibleError& e) {
            std::ostringstream os;
            os << e.what() << " at " << to_string(sweep_variable()) << " = " << v;
            throw ConfigError(os.str());
        }
    }
}

namespace {

Experiment reference_experiment(std::string name, Medium medium) {
    Experiment e;
    e.name = std::move(name);
    e.medium = medium;
    e.network = reference::network(medium);
    e.bounds = reference::bounds(4.5 * reference::kMilli);
    e.memory = reference::kMemory;
    return e;
}

Experiment tmax_sweep(std::string name, Medium medium) {
    Experiment e = reference_experiment(std::move(name), medium);
    auto grid = log_space(1.0, 20.0, 40);
    for (double& g : grid) g *= reference::kMilli;
    e.sweep = Sweep{SweepVariable::TMax, grid};
    return e;
}

const std::vector<std::string>& names() {
    static const std::vector<std::string> n{"mde-fig4a", "mode-fig4b", "sde-fig4c", "budget-fig5",
                                            "bars-fig6", "iui-fig7",   "quant-fig8b"};
    return n;
}

}  // namespace

std::vector<std::string> preset_names() { return names(); }

Experiment preset(std::string_view name) {
    constexpr double ms = reference::kMilli;
    if (name == "mde-fig4a") return tmax_sweep("mde-fig4a", Medium::MDE);
    if (name == "mode-fig4b") return tmax_sweep("mode-fig4b", Medium::MODE);
    if (name == "sde-fig4c") return tmax_sweep("sde-fig4c", Medium::SDE);
    if (name == "budget-fig5") {
        Experiment e = reference_experiment("budget-fig5", Medium::MODE);
        e.bounds.t_max = 4.95 * ms;
        e.schemes = {Scheme::STSN, Scheme::DTSN};
        e.sweep = Sweep{SweepVariable::Budget, {300, 600, 900, 1200, 1500, 1800, 2100, 2400}};
        return e;
    }
    if (name == "bars-fig6") {
        Experiment e = reference_experiment("bars-fig6", Medium::MODE);
        e.schemes = {Scheme::STDN, Scheme::DTSN};
        e.sweep = Sweep{SweepVariable::TMax, {1 * ms, 5 * ms, 10 * ms, 13 * ms, 15 * ms, 20 * ms}};
        return e;
    }
    if (name == "iui-fig7") {
        Experiment e = reference_experiment("iui-fig7", Medium::MODE);
        e.sweep = Sweep{SweepVariable::Memory, {0, 1, 2, 3, 4, 5, 6}};
        return e;
    }
    if (name == "quant-fig8b") {
        Experiment e = reference_experiment("quant-fig8b", Medium::MODE);
        e.bounds.t_max = 10 * ms;
        e.schemes = {Scheme::STDN};
        e.sweep = Sweep{SweepVariable::PsiA, {20, 40, 60, 80, 100}};
        return e;
    }
    std::string known;
    for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

namespace {

constexpr double kUm = 1e-6;
constexpr double kMs = 1e-3;

Vec3 vec3(const json& j, const char* key) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(std::string(key) + ": expected [x, y, z]");
    return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const char* where) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
        }
    }
}

MomentMode parse_moment_mode(const std::string& s) {
    if (s == "paper" || s == "PaperExact") return MomentMode::PaperExact;
    if (s == "corrected" || s == "CorrectedMixture") return MomentMode::CorrectedMixture;
    throw ConfigError("moment_mode: expected 'paper' or 'corrected', got '" + s + "'");
}

void apply_sweep(Experiment& e, const json& j) {
    reject_unknown(j, {"variable", "grid", "log_space"}, "sweep");
    Sweep sw;
    sw.variable = parse_sweep_variable(j.at("variable").get<std::string>());
    const double scale = sw.variable == SweepVariable::TMax ? kMs : 1.0;
    if (j.contains("grid") && j.contains("log_space")) throw ConfigError("sweep: give either grid or log_space");
    if (j.contains("grid")) {
        for (const auto& v : j.at("grid")) sw.grid.push_back(v.get<double>() * scale);
    } else if (j.contains("log_space")) {
        const auto& ls = j.at("log_space");
        reject_unknown(ls, {"from", "to", "points"}, "sweep.log_space");
        sw.grid = log_space(ls.at("from").get<double>(), ls.at("to").get<double>(), ls.at("points").get<int>());
        for (double& g : sw.grid) g *= scale;
    }
    e.sweep = sw;
}

void apply_sim(Experiment& e, const json& j) {
    reject_unknown(j, {"frames", "particles", "warmup_frames", "leak", "sampling", "dt_ms", "chunk",
                       "empirical_thresholds"},
                   "sim");
    SimSettings s = e.sim.value_or(SimSettings{});
    if (j.contains("frames")) s.config.n_frames = j.at("frames").get<long>();
    if (j.contains("particles")) s.config.n_particles = j.at("particles").get<long>();
    if (j.contains("warmup_frames")) s.config.warmup_frames = j.at("warmup_frames").get<int>();
    if (j.contains("chunk")) s.config.chunk = j.at("chunk").get<long>();
    if (j.contains("dt_ms")) s.config.dt = j.at("dt_ms").get<double>() * kMs;
    if (j.contains("empirical_thresholds")) s.empirical_thresholds = j.at("empirical_thresholds").get<bool>();
    if (j.contains("leak")) {
        const auto v = j.at("leak").get<std::string>();
        if (v == "modeled") s.config.leak = LeakModel::Modeled;
        else if (v == "presence") s.config.leak = LeakModel::Presence;
        else throw ConfigError("sim.leak: expected 'modeled' or 'presence'");
    }
    if (j.contains("sampling")) {
        const auto v = j.at("sampling").get<std::string>();
        if (v == "exact") s.config.sampling = Sampling::ExactGaussian;
        else if (v == "euler") s.config.sampling = Sampling::EulerMaruyama;
        else throw ConfigError("sim.sampling: expected 'exact' or 'euler'");
    }
    e.sim = s;
}

void apply_document(Experiment& e, const json& doc) {
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    reject_unknown(doc,
                   {"preset", "name", "medium", "diffusion_um2_per_s", "drift_um_per_s", "receiver_center_um",
                    "receiver_radius_um", "transmitters_um", "bounds", "memory", "schemes", "moment_mode", "sweep",
                    "solver", "sim"},
                   "config");
    if (doc.contains("preset")) e = preset(doc.at("preset").get<std::string>());
    if (doc.contains("name")) e.name = doc.at("name").get<std::string>();
    if (doc.contains("medium")) {
        try {
            e.medium = parse_medium(doc.at("medium").get<std::string>());
        } catch (const DomainError& err) {
            throw ConfigError(err.what());
        }
        e.network.channel.diffusion_coefficient = medium_scenario(e.medium).diffusion_coefficient;
    }
    auto& ch = e.network.channel;
    if (doc.contains("diffusion_um2_per_s")) ch.diffusion_coefficient = doc.at("diffusion_um2_per_s").get<double>() * kUm * kUm;
    if (doc.contains("drift_um_per_s")) ch.drift = kUm * vec3(doc.at("drift_um_per_s"), "drift_um_per_s");
    if (doc.contains("receiver_center_um")) ch.receiver_center = kUm * vec3(doc.at("receiver_center_um"), "receiver_center_um");
    if (doc.contains("receiver_radius_um")) ch.receiver_radius = doc.at("receiver_radius_um").get<double>() * kUm;
    if (doc.contains("transmitters_um")) {
        e.network.layout.positions.clear();
        for (const auto& p : doc.at("transmitters_um")) e.network.layout.positions.push_back(kUm * vec3(p, "transmitters_um"));
    }
    if (doc.contains("bounds")) {
        const auto& b = doc.at("bounds");
        reject_unknown(b, {"psi_t_ms", "t_max_ms", "psi_a", "upper_a", "budget"}, "bounds");
        if (b.contains("psi_t_ms")) e.bounds.psi_t = b.at("psi_t_ms").get<double>() * kMs;
        if (b.contains("t_max_ms")) e.bounds.t_max = b.at("t_max_ms").get<double>() * kMs;
        if (b.contains("psi_a")) e.bounds.psi_a = b.at("psi_a").get<double>();
        if (b.contains("upper_a")) e.bounds.upper_a = b.at("upper_a").get<double>();
        if (b.contains("budget")) e.bounds.budget = b.at("budget").get<double>();
    }
    if (doc.contains("memory")) e.memory = doc.at("memory").get<int>();
    if (doc.contains("schemes")) {
        e.schemes.clear();
        for (const auto& s : doc.at("schemes")) {
            try {
                e.schemes.push_back(parse_scheme(s.get<std::string>()));
            } catch (const DomainError& err) {
                throw ConfigError(err.what());
            }
        }
    }
    if (doc.contains("moment_mode")) e.mode = parse_moment_mode(doc.at("moment_mode").get<std::string>());
    if (doc.contains("sweep")) {
        if (doc.at("sweep").is_null()) e.sweep.reset();
        else apply_sweep(e, doc.at("sweep"));
    }
    if (doc.contains("solver")) {
        const auto& s = doc.at("solver");
        reject_unknown(s, {"coord_tol", "obj_tol", "max_outer_iters", "max_1d_iters", "scan_points", "line_search"},
                       "solver");
        if (s.contains("coord_tol")) e.solver.coord_tol = s.at("coord_tol").get<double>();
        if (s.contains("obj_tol")) e.solver.obj_tol = s.at("obj_tol").get<double>();
        if (s.contains("max_outer_iters")) e.solver.max_outer_iters = s.at("max_outer_iters").get<int>();
        if (s.contains("max_1d_iters")) e.solver.max_1d_iters = s.at("max_1d_iters").get<int>();
        if (s.contains("scan_points")) e.solver.scan_points = s.at("scan_points").get<int>();
        if (s.contains("line_search")) {
            const auto v = s.at("line_search").get<std::string>();
            if (v == "golden") e.solver.line_search = LineSearch::Golden;
            else if (v == "gradient_bisection") e.solver.line_search = LineSearch::GradientBisection;
            else throw ConfigError("solver.line_search must be 'golden' or 'gradient_bisection'");
        }
    }
    if (doc.contains("sim")) apply_sim(e, doc.at("sim"));
}

}  // namespace

Experiment apply_config(const Experiment& base, std::string_view json_text) {
    Experiment e = base;
    try {
        apply_document(e, json::parse(json_text));
    } catch (const json::exception& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }
    return e;
}

Experiment load_config(const std::string& path, const std::optional<std::string>& preset_name) {
    Experiment base = preset_name ? preset(*preset_name) : reference_experiment("custom", Medium::MODE);
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return apply_config(base, buf.str());
}

namespace {

void solve_point(const Experiment& e, double value, std::size_t i, int inner_threads, bool need_dtdn, ResultRow& row) {
    auto wants = [&](Scheme s) { return std::find(e.schemes.begin(), e.schemes.end(), s) != e.schemes.end(); };
    const Problem p = e.problem_at(value);
    SchemeResults all;
    all.stsn = stsn(p);
    if (wants(Scheme::DTSN) || need_dtdn) all.dtsn = dtsn(p, e.solver);
    if (wants(Scheme::STDN) || need_dtdn) all.stdn = stdn(p, e.solver);
    if (need_dtdn) all.dtdn = dtdn(p, e.solver, all.dtsn, all.stdn);

    row.sweep_value = value;
    for (Scheme s : e.schemes) {
        SchemeOutcome out{all[s], std::nullopt};
        if (e.sim) {
            SimConfig cfg = e.sim->config;
            cfg.threads = inner_threads;
            cfg.seed = stream_seed(cfg.seed, i * 4 + static_cast<std::size_t>(s));
            const auto& sol = out.solution;
            if (e.sim->empirical_thresholds) {
                out.sim = simulate_frames(sol.schedule, sol.allocation, p.network, p.memory, cfg);
            } else {
                std::vector<double> taus;
                for (const auto& l : thresholded_links(sol.schedule, sol.allocation, p.network, p.memory, p.mode)) {
                    taus.push_back(l.tau);
                }
                out.sim = simulate_frames(sol.schedule, sol.allocation, p.network, p.memory, taus, cfg);
            }
        }
        row.schemes.push_back(std::move(out));
    }
    for (const auto& o : row.schemes) {
        if (!std::isfinite(o.solution.objective)) {
            throw NumericError("non-finite objective for " + std::string(to_string(o.solution.scheme)));
        }
    }
}

}  // namespace

std::vector<ResultRow> run_experiment(const Experiment& e, int threads) {
    e.validate();
    const std::vector<double> points = e.points();
    std::vector<ResultRow> rows(points.size());
    auto wants = [&](Scheme s) { return std::find(e.schemes.begin(), e.schemes.end(), s) != e.schemes.end(); };
    const bool need_dtdn = wants(Scheme::DTDN);
    const int inner_threads = points.size() > 1 ? 1 : threads;

    parallel_for(points.size(), threads, [&](std::size_t i) {
        try {
            solve_point(e, points[i], i, inner_threads, need_dtdn, rows[i]);
        } catch (const DomainError& err) {
            // The configuration was validated above, so a domain violation
            // here means the model arithmetic broke down (overflow, NaN).
            std::ostringstream os;
            os << "numeric breakdown at " << to_string(e.sweep_variable()) << " = " << points[i] << ": " << err.what();
            throw NumericError(os.str());
        }
    });
    return rows;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string_view mode_name(MomentMode m) { return m == MomentMode::PaperExact ? "paper" : "corrected"; }

}  // namespace

void write_csv(std::ostream& out, const Experiment& e, const std::vector<ResultRow>& rows) {
    const std::size_t r = e.network.size();
    out << kCsvVersionLine << '\n';
    out << "# experiment=" << e.name << " medium=" << to_string(e.medium) << " moment_mode=" << mode_name(e.mode)
        << " memory=" << e.memory << " transmitters=" << r << " sweep=" << to_string(e.sweep_variable()) << '\n';
    out << "# units: times s, allocations molecules, BER and G probabilities, complexity dimensionless\n";

    std::vector<std::string> cols{std::string(sweep_column(e.sweep_variable()))};
    for (Scheme s : e.schemes) {
        const std::string k(to_string(s));
        cols.push_back(k + "_G");
        for (std::size_t i = 1; i <= r; ++i) cols.push_back(k + "_ber_" + std::to_string(i));
        for (std::size_t i = 1; i <= r; ++i) cols.push_back(k + "_t_" + std::to_string(i) + "_s");
        for (std::size_t i = 1; i <= r; ++i) cols.push_back(k + "_A_" + std::to_string(i));
        for (std::size_t i = 1; i <= r; ++i) cols.push_back(k + "_Aint_" + std::to_string(i));
        cols.push_back(k + "_G_int");
        cols.push_back(k + "_alpha");
        cols.push_back(k + "_beta");
        cols.push_back(k + "_gamma");
        cols.push_back(k + "_complexity");
        cols.push_back(k + "_complexity_actual");
        cols.push_back(k + "_warning");
        cols.push_back(k + "_clamped");
        if (e.sim) {
            cols.push_back(k + "_sim_G");
            cols.push_back(k + "_sim_G_se");
            for (std::size_t i = 1; i <= r; ++i) cols.push_back(k + "_sim_ber_" + std::to_string(i));
            for (std::size_t i = 1; i <= r; ++i) cols.push_back(k + "_sim_ber_se_" + std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';

    for (const auto& row : rows) {
        std::vector<std::string> v{num(row.sweep_value)};
        for (const auto& o : row.schemes) {
            const auto& s = o.solution;
            v.push_back(num(s.objective));
            for (double b : s.per_tx_ber) v.push_back(num(b));
            for (double t : s.schedule.slot_durations) v.push_back(num(t));
            for (double a : s.allocation.molecules) v.push_back(num(a));
            for (double a : s.allocation_int) v.push_back(num(a));
            v.push_back(num(s.objective_int));
            v.push_back(std::to_string(s.iterations.alpha));
            v.push_back(std::to_string(s.iterations.beta));
            v.push_back(std::to_string(s.iterations.gamma));
            v.push_back(num(s.complexity_estimate));
            v.push_back(num(s.complexity_actual));
            v.push_back(s.warning ? "1" : "0");
            v.push_back(std::to_string(s.clamped_terms));
            if (o.sim) {
                const auto bers = o.sim->bers();
                double mean = 0.0, var = 0.0;
                for (const auto& t : o.sim->tx) {
                    mean += t.ber / static_cast<double>(r);
                    var += t.ber_se * t.ber_se / static_cast<double>(r * r);
                }
                v.push_back(num(mean));
                v.push_back(num(std::sqrt(var)));
                for (const auto& t : o.sim->tx) v.push_back(num(t.ber));
                for (const auto& t : o.sim->tx) v.push_back(num(t.ber_se));
            }
        }
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
        out << '\n';
    }
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    return std::nullopt;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw ConfigError("csv line " + std::to_string(line) + ": " + what);
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    std::size_t n = 0;
    bool versioned = false;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (n == 1) {
            if (line != kCsvVersionLine) parse_fail(n, "expected version line '" + std::string(kCsvVersionLine) + "'");
            versioned = true;
        }
        if (line.empty()) continue;
        if (line.front() == '#') {
            t.comments.push_back(line);
            continue;
        }
        auto cells = split(line);
        if (t.columns.empty()) {
            for (const auto& c : cells) {
                if (c.empty()) parse_fail(n, "empty column name");
            }
            t.columns = std::move(cells);
            continue;
        }
        if (cells.size() != t.columns.size()) {
            parse_fail(n, "expected " + std::to_string(t.columns.size()) + " fields, found " + std::to_string(cells.size()));
        }
        std::vector<double> row;
        for (const auto& c : cells) {
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (c.empty() || end != c.c_str() + c.size()) parse_fail(n, "not a number: '" + c + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (!versioned) parse_fail(1, "empty file");
    if (t.columns.empty()) parse_fail(n, "missing header row");
    return t;
}

std::string plot_script(const CsvTable& table, const std::string& csv_path) {
    const std::string x = table.columns.front();
    std::vector<std::string> schemes;
    for (const auto& c : table.columns) {
        if (c.size() > 2 && c.ends_with("_G") && !c.ends_with("_sim_G")) schemes.push_back(c.substr(0, c.size() - 2));
    }
    if (schemes.empty()) throw ConfigError("csv: no '<scheme>_G' columns to plot");

    std::string stem = csv_path;
    if (stem.ends_with(".csv")) stem.resize(stem.size() - 4);
    std::ostringstream os;
    os << "# gnuplot script for " << csv_path << "\n"
       << "set terminal svg size 900,600\n"
       << "set output '" << stem << ".svg'\n"
       << "set datafile separator ','\n"
       << "set datafile commentschars '#'\n"
       << "set key autotitle columnhead outside right\n"
       << "set logscale y\n"
       << "set format y '10^{%L}'\n";
    if (x == "T_max_s") os << "set logscale x\n";
    os << "set xlabel '" << x << "'\n"
       << "set ylabel 'mean error probability G'\n"
       << "set grid\n"
       << "plot ";
    bool first = true;
    auto idx = [&](const std::string& name) { return *table.column(name) + 1; };
    for (const auto& s : schemes) {
        if (!first) os << ", \\\n     ";
        first = false;
        os << "'" << csv_path << "' using 1:" << idx(s + "_G") << " with linespoints title '" << s << "'";
        if (table.column(s + "_sim_G") && table.column(s + "_sim_G_se")) {
            os << ", \\\n     '" << csv_path << "' using 1:" << idx(s + "_sim_G") << ":" << idx(s + "_sim_G_se")
               << " with yerrorbars title '" << s << " (simulated)'";
        }
    }
    os << "\n";
    return os.str();
}

}  // namespace mcvd
