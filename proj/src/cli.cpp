#include "polydicke/cli.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "polydicke/errors.hpp"
#include "polydicke/io.hpp"
#include "polydicke/observables.hpp"
#include "polydicke/parallel.hpp"
#include "polydicke/phasemap.hpp"
#include "polydicke/quantum.hpp"
#include "polydicke/varsurface.hpp"

namespace polydicke::cli {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

double parse_double(const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("not a number: '" + text + "'");
    }
}

struct RunConfig {
    std::string command;
    std::string system_path;
    std::string out_path;
    std::string axes_text;
    std::string range_text;
    std::string cutoff_text = "8";
    std::string sweep;
    int res = 21;
    int na = 1;
    bool rwa = false;
    std::optional<double> tol;
    std::uint64_t seed = 1;
    std::size_t budget = 4'000'000;
    double radius = 1.0;

    std::string canonical(const AtomicSystem& system) const {
        json doc{{"system", system_to_json(system)}, {"command", command}, {"axes", axes_text},
                 {"range", range_text}, {"cutoff", cutoff_text}, {"sweep", sweep}, {"res", res}, {"na", na},
                 {"rwa", rwa}, {"tol", tol ? json(*tol) : json()}, {"seed", seed}, {"budget", budget},
                 {"radius", radius}};
        return doc.dump();
    }
};

json metadata(const RunConfig& cfg, const AtomicSystem& system) {
    return {{"tool", "polydicke"},
            {"version", std::string(kVersion)},
            {"command", cfg.command},
            {"config_hash", hash_hex(cfg.canonical(system))},
            {"seed", cfg.seed}};
}

std::string csv_metadata(const RunConfig& cfg, const AtomicSystem& system) {
    return "# polydicke " + std::string(kVersion) + " command=" + cfg.command +
           " config_hash=" + hash_hex(cfg.canonical(system)) + " seed=" + std::to_string(cfg.seed) + "\n";
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
    if (cfg.out_path.empty()) {
        out << content;
    } else {
        write_atomic(cfg.out_path, content);
    }
}

AtomicSystem load(const RunConfig& cfg, std::ostream& err) {
    if (cfg.system_path.empty()) throw ConfigError("--system is required");
    auto system = load_system(cfg.system_path);
    const auto report = validate(system);
    for (const auto& n : report.notices) err << "notice: " << n << '\n';
    require_valid(system);
    return system;
}

std::vector<GridAxis> make_axes(const RunConfig& cfg, const AtomicSystem& system, bool scan) {
    if (cfg.axes_text.empty()) throw ConfigError("--axes is required");
    const auto pairs = parse_axes(cfg.axes_text);
    const auto ranges = parse_ranges(cfg.range_text.empty() ? "0:2" : cfg.range_text, pairs.size());
    if (scan && cfg.res < 2) throw ConfigError("--res must be at least 2");
    std::vector<GridAxis> axes;
    for (std::size_t a = 0; a < pairs.size(); ++a) {
        if (!system.index_of(pairs[a])) {
            throw ConfigError("axis " + pairs[a].label() + " is not a transition of the system");
        }
        axes.push_back({pairs[a], ranges[a].first, ranges[a].second, cfg.res});
    }
    return axes;
}

// ---------------------------------------------------------------------------

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.system_path.empty()) throw ConfigError("--system is required");
    const auto system = load_system(cfg.system_path);
    const auto report = validate(system);
    for (const auto& v : report.violations) err << "error: " << v << '\n';
    for (const auto& n : report.notices) err << "notice: " << n << '\n';
    if (!report.ok()) return kConfigError;
    out << "ok: " << system.levels() << " levels, " << system.mode_count() << " modes\n";
    return kOk;
}

int cmd_phase_diagram(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto system = load(cfg, err);
    const auto axes = make_axes(cfg, system, true);
    const auto grid = scan_grid(system, axes);

    std::ostringstream csv;
    csv << csv_metadata(cfg, system);
    write_grid_csv(grid, csv);

    json normal = json::array();
    for (const auto& axis : axes) {
        const double mu = normal_boundary(system, axis.pair);
        normal.push_back({{"transition", axis.pair.label()},
                          {"mu", mu},
                          {"order", transition_order(RegionLabel::normal(), RegionLabel::collective(axis.pair))}});
    }
    json separatrices = json::array();
    for (std::size_t a = 0; a < axes.size(); ++a) {
        for (std::size_t b = a + 1; b < axes.size(); ++b) {
            SweepSpec sweep{axes[a].pair, axes[a].lo, axes[a].hi, axes[b].pair, axes[b].lo, axes[b].hi, cfg.res};
            try {
                separatrices.push_back(separatrix_to_json(collective_boundary(system, axes[a].pair, axes[b].pair, sweep)));
            } catch (const NotFoundError&) {
                // the two regions do not touch inside the scanned window
            }
        }
    }
    json sidecar{{"meta", metadata(cfg, system)},
                 {"data", {{"normal_boundaries", normal}, {"separatrices", separatrices}}}};

    emit(cfg, csv.str(), out);
    if (!cfg.out_path.empty()) write_atomic(cfg.out_path + ".json", sidecar.dump(2) + "\n");
    return kOk;
}

int cmd_observables(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto system = load(cfg, err);
    if (cfg.axes_text.empty()) throw ConfigError("--axes is required");
    const auto pairs = parse_axes(cfg.axes_text);
    for (const auto& p : pairs) system.transition(p);
    if (cfg.res < 2) throw ConfigError("--res must be at least 2");

    CouplingPath path;
    std::vector<std::string> prefix;
    std::pair<double, double> range;
    if (cfg.sweep == "zeta") {
        if (pairs.size() != 2) throw ConfigError("a zeta sweep needs exactly two axes");
        path = angle_path(system, pairs[0], pairs[1], cfg.radius);
        range = cfg.range_text.empty() ? std::pair{0.0, std::numbers::pi / 2} : parse_ranges(cfg.range_text, 1)[0];
        prefix = {"zeta", "mu_" + pairs[0].label(), "mu_" + pairs[1].label()};
    } else if (cfg.sweep.empty() || cfg.sweep == "mu") {
        if (pairs.size() != 1) throw ConfigError("a coupling sweep needs exactly one axis");
        path = line_path(system, pairs[0]);
        range = parse_ranges(cfg.range_text.empty() ? "0:2" : cfg.range_text, 1)[0];
        prefix = {"mu_" + pairs[0].label()};
    } else {
        throw ConfigError("unknown sweep type '" + cfg.sweep + "'");
    }

    std::ostringstream csv;
    csv << csv_metadata(cfg, system);
    write_observables_header(system, csv, prefix);
    // header ends with a newline; append the jump column name before it
    std::string text = csv.str();
    text.pop_back();
    text += ",jump\n";

    std::optional<RegionLabel> previous;
    const GridAxis axis{pairs[0], range.first, range.second, cfg.res};
    for (int i = 0; i < cfg.res; ++i) {
        const double t = axis.value(i);
        const auto s = path(t);
        const auto best = minimize(s);
        const auto label = RegionLabel::of(best);
        std::vector<double> values{t};
        if (cfg.sweep == "zeta") {
            values.push_back(s.transition(pairs[0]).mu);
            values.push_back(s.transition(pairs[1]).mu);
        }
        std::ostringstream row;
        write_observables_row(s, best, expectations(s, best), row, values);
        std::string line = row.str();
        line.pop_back();
        const bool jump = previous && *previous != label && transition_order(*previous, label) == 1;
        text += line + (jump ? ",1\n" : ",0\n");
        previous = label;
    }
    emit(cfg, text, out);
    return kOk;
}

struct PointSet {
    std::vector<GridAxis> axes;
    std::vector<std::vector<double>> coords;  // empty coords: the system's own couplings
};

PointSet make_points(const RunConfig& cfg, const AtomicSystem& system) {
    PointSet points;
    if (cfg.axes_text.empty()) {
        points.coords.emplace_back();
        return points;
    }
    points.axes = make_axes(cfg, system, true);
    std::size_t total = 1;
    for (const auto& a : points.axes) total *= static_cast<std::size_t>(a.points);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::vector<double> c(points.axes.size());
        std::size_t rest = flat;
        for (std::size_t a = points.axes.size(); a-- > 0;) {
            const auto n = static_cast<std::size_t>(points.axes[a].points);
            c[a] = points.axes[a].value(static_cast<int>(rest % n));
            rest /= n;
        }
        points.coords.push_back(std::move(c));
    }
    return points;
}

QuantumGroundResult solve_exact(const RunConfig& cfg, const AtomicSystem& s) {
    SolverConfig solver;
    solver.seed = cfg.seed;
    solver.max_states = cfg.budget;
    const auto cutoffs = parse_cutoffs(cfg.cutoff_text, s.mode_count());
    if (cfg.tol) return converge_cutoff(s, cfg.na, cutoffs, *cfg.tol, cfg.rwa, solver).result;
    return ground_state(s, cfg.na, cutoffs, cfg.rwa, solver);
}

json delta_nu_json(const AtomicSystem& s, const QuantumGroundResult& r) {
    if (s.mode_count() < 2) return "undefined";
    const auto d = delta_nu(s, r, s.transitions()[0].pair, s.transitions()[1].pair);
    return d ? json(*d) : json("undefined");
}

int cmd_exact(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto system = load(cfg, err);
    if (cfg.na < 1) throw ConfigError("--na must be positive");
    const auto points = make_points(cfg, system);
    std::vector<json> records(points.coords.size());
    parallel_for(points.coords.size(), [&](std::size_t i) {
        const auto s = system_at(system, points.axes, points.coords[i]);
        const auto r = solve_exact(cfg, s);
        json rec = result_to_json(s, r);
        rec["delta_nu"] = delta_nu_json(s, r);
        if (!r.truncation_converged) rec["warnings"] = {"boundary weight above threshold"};
        records[i] = std::move(rec);
    });
    json doc{{"meta", metadata(cfg, system)}, {"data", {{"points", records}}}};
    emit(cfg, doc.dump(2) + "\n", out);
    return kOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto system = load(cfg, err);
    if (cfg.na < 1) throw ConfigError("--na must be positive");
    const auto points = make_points(cfg, system);
    const std::size_t n = points.coords.size();

    struct Row {
        json record;
        RegionLabel label;
        double gap = 0.0;
        std::optional<bool> agree;
    };
    std::vector<Row> rows(n);
    parallel_for(n, [&](std::size_t i) {
        const auto s = system_at(system, points.axes, points.coords[i]);
        const auto var = minimize(s);
        const auto r = solve_exact(cfg, s);
        Row row;
        row.label = RegionLabel::of(var);
        row.gap = var.energy - r.energy;
        json couplings = json::object();
        for (const auto& t : s.transitions()) couplings["mu_" + t.pair.label()] = t.mu;
        const json dnu = delta_nu_json(s, r);
        if (s.mode_count() >= 2 && var.pair && dnu.is_number()) {
            const double d = dnu.get<double>();
            if (*var.pair == s.transitions()[0].pair) row.agree = d < 0.0;
            if (*var.pair == s.transitions()[1].pair) row.agree = d > 0.0;
        }
        row.record = {{"couplings", couplings},
                      {"E_var", var.energy},
                      {"E_exact", r.energy},
                      {"gap", row.gap},
                      {"region", row.label.name()},
                      {"delta_nu", dnu},
                      {"labels_agree", row.agree ? json(*row.agree) : json()},
                      {"cutoffs", r.cutoffs},
                      {"boundary_weight", r.boundary_weight}};
        rows[i] = std::move(row);
    });

    // A cell is away from separatrices when every cell within two grid steps shares its label.
    auto away_from_separatrix = [&](std::size_t flat) {
        if (points.axes.empty()) return true;
        const std::size_t dims = points.axes.size();
        std::vector<int> idx(dims);
        std::size_t rest = flat;
        for (std::size_t a = dims; a-- > 0;) {
            idx[a] = static_cast<int>(rest % static_cast<std::size_t>(points.axes[a].points));
            rest /= static_cast<std::size_t>(points.axes[a].points);
        }
        for (std::size_t other = 0; other < n; ++other) {
            std::size_t r2 = other;
            bool near = true;
            for (std::size_t a = dims; a-- > 0;) {
                const int o = static_cast<int>(r2 % static_cast<std::size_t>(points.axes[a].points));
                r2 /= static_cast<std::size_t>(points.axes[a].points);
                if (std::abs(o - idx[a]) > 2) near = false;
            }
            if (near && !(rows[other].label == rows[flat].label)) return false;
        }
        return true;
    };

    double max_gap = -std::numeric_limits<double>::infinity(), min_gap = std::numeric_limits<double>::infinity();
    double sum_gap = 0.0;
    std::size_t compared = 0, agreed = 0;
    json records = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        max_gap = std::max(max_gap, rows[i].gap);
        min_gap = std::min(min_gap, rows[i].gap);
        sum_gap += rows[i].gap;
        if (rows[i].agree && away_from_separatrix(i)) {
            ++compared;
            if (*rows[i].agree) ++agreed;
        }
        records.push_back(rows[i].record);
    }
    json summary{{"points", n},
                 {"max_gap", max_gap},
                 {"min_gap", min_gap},
                 {"mean_gap", sum_gap / static_cast<double>(n)},
                 {"label_comparisons", compared},
                 {"label_agreement", compared ? json(static_cast<double>(agreed) / compared) : json("undefined")}};
    json doc{{"meta", metadata(cfg, system)}, {"data", {{"points", records}, {"summary", summary}}}};
    emit(cfg, doc.dump(2) + "\n", out);
    return kOk;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<LevelPair> parse_axes(const std::string& text) {
    std::vector<LevelPair> pairs;
    for (const auto& part : split(text, ',')) {
        const auto p = parse_pair(part);
        for (const auto& q : pairs) {
            if (q == p) throw ConfigError("axis " + p.label() + " given twice");
        }
        pairs.push_back(p);
    }
    if (pairs.empty() || pairs.size() > 3) throw ConfigError("between one and three axes are required");
    return pairs;
}

std::vector<std::pair<double, double>> parse_ranges(const std::string& text, std::size_t axes) {
    std::vector<std::pair<double, double>> ranges;
    for (const auto& part : split(text, ',')) {
        const auto bounds = split(part, ':');
        if (bounds.size() != 2) throw ConfigError("range '" + part + "' must look like lo:hi");
        const double lo = parse_double(bounds[0]);
        const double hi = parse_double(bounds[1]);
        if (!(hi > lo)) throw ConfigError("range '" + part + "' must have hi > lo");
        ranges.emplace_back(lo, hi);
    }
    if (ranges.size() == 1) ranges.resize(axes, ranges[0]);
    if (ranges.size() != axes) throw ConfigError("give one range for all axes or one per axis");
    return ranges;
}

std::vector<int> parse_cutoffs(const std::string& text, std::size_t modes) {
    std::vector<int> cutoffs;
    for (const auto& part : split(text, ',')) {
        const double v = parse_double(part);
        if (v < 0 || v != std::floor(v) || v > 1e6) throw ConfigError("cutoff '" + part + "' must be a non-negative integer");
        cutoffs.push_back(static_cast<int>(v));
    }
    if (cutoffs.size() == 1) cutoffs.resize(modes, cutoffs[0]);
    if (cutoffs.size() != modes) throw ConfigError("give one cutoff for all modes or one per mode");
    return cutoffs;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Phase diagrams and ground states of multi-level atoms coupled to several field modes"};
    app.name("polydicke");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    RunConfig cfg;
    double tol = 0.0;
    auto add_system = [&](CLI::App* sub) { sub->add_option("--system", cfg.system_path, "System JSON file")->required(); };
    auto add_output = [&](CLI::App* sub) { sub->add_option("--out", cfg.out_path, "Output file (default stdout)"); };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--axes", cfg.axes_text, "Varying couplings, e.g. 1-2,2-3");
        sub->add_option("--range", cfg.range_text, "lo:hi for all axes or one per axis");
        sub->add_option("--res", cfg.res, "Points per axis");
    };
    auto add_quantum = [&](CLI::App* sub) {
        sub->add_option("--na", cfg.na, "Number of atoms");
        sub->add_option("--cutoff", cfg.cutoff_text, "Photon cutoff, one value or one per mode");
        sub->add_flag("--rwa", cfg.rwa, "Rotating-wave Hamiltonian");
        sub->add_option("--tol", tol, "Converge cutoffs to this energy tolerance");
        sub->add_option("--seed", cfg.seed, "Eigensolver seed");
        sub->add_option("--budget", cfg.budget, "Maximum basis size");
    };

    auto* validate_cmd = app.add_subcommand("validate", "Check a system file");
    validate_cmd->add_option("--system", cfg.system_path, "System JSON file")->required();

    auto* phase = app.add_subcommand("phase-diagram", "Variational phase diagram on a grid");
    add_system(phase);
    add_output(phase);
    add_grid(phase);
    phase->add_option("--seed", cfg.seed, "Recorded in the metadata");

    auto* obs = app.add_subcommand("observables", "Variational observables along a sweep");
    add_system(obs);
    add_output(obs);
    add_grid(obs);
    obs->add_option("--sweep", cfg.sweep, "mu (default) or zeta");
    obs->add_option("--radius", cfg.radius, "Coupling radius of a zeta sweep");
    obs->add_option("--seed", cfg.seed, "Recorded in the metadata");

    auto* exact = app.add_subcommand("exact", "Exact ground state on a truncated basis");
    add_system(exact);
    add_output(exact);
    add_grid(exact);
    add_quantum(exact);

    auto* compare = app.add_subcommand("compare", "Variational versus exact ground state");
    add_system(compare);
    add_output(compare);
    add_grid(compare);
    add_quantum(compare);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    for (auto* sub : {exact, compare}) {
        if (sub->parsed() && sub->count("--tol") > 0) {
            if (!(tol > 0.0)) {
                err << "error: --tol must be positive\n";
                return kConfigError;
            }
            cfg.tol = tol;
        }
    }

    try {
        if (validate_cmd->parsed()) {
            cfg.command = "validate";
            return cmd_validate(cfg, out, err);
        }
        if (phase->parsed()) {
            cfg.command = "phase-diagram";
            return cmd_phase_diagram(cfg, out, err);
        }
        if (obs->parsed()) {
            cfg.command = "observables";
            return cmd_observables(cfg, out, err);
        }
        if (exact->parsed()) {
            cfg.command = "exact";
            return cmd_exact(cfg, out, err);
        }
        cfg.command = "compare";
        return cmd_compare(cfg, out, err);
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << '\n';
        return kBudgetError;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << " (residual " << format_number(e.residual()) << ")\n";
        return kBudgetError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"polydicke"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace polydicke::cli
