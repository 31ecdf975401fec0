#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polydicke/model.hpp"
#include "polydicke/varsurface.hpp"

namespace polydicke {

/// Normal region or the monochromatic collective region S(j,k).
struct RegionLabel {
    std::optional<LevelPair> pair;

    static RegionLabel normal() { return {}; }
    static RegionLabel collective(LevelPair p) { return {p}; }
    static RegionLabel of(const VariationalCandidate& candidate) { return {candidate.pair}; }
    static RegionLabel parse(const std::string& text);

    bool is_normal() const { return !pair.has_value(); }
    /// "N" or "S_j_k".
    std::string name() const;

    bool operator==(const RegionLabel&) const = default;
};

/// Coupling at which the candidate of `pair` starts to exist; for j = 1 this is
/// the bifurcation point, for j >= 2 the point where it ties with the normal state.
double normal_boundary(const AtomicSystem& system, LevelPair pair);

/// 2 for N <-> S(1,k), 1 for N <-> S(j>=2,k) and for S <-> S.
int transition_order(const RegionLabel& a, const RegionLabel& b);

/// One-parameter family of systems.
using CouplingPath = std::function<AtomicSystem(double)>;

/// mu_pair = t, all other couplings as in `system`.
CouplingPath line_path(const AtomicSystem& system, LevelPair pair);
/// (mu_a, mu_b) = (radius cos t, radius sin t).
CouplingPath angle_path(const AtomicSystem& system, LevelPair a, LevelPair b, double radius);

/// Lowest derivative order at which the one-sided derivatives of the
/// variational ground energy along `path` differ at t0. Throws NotFoundError
/// when none of orders 1..max_order jump.
int ehrenfest_probe(const CouplingPath& path, double t0, int max_order = 3);

struct SweepSpec {
    LevelPair solve_for;  // coupling solved for at each point
    double lo = 0.0;
    double hi = 2.0;
    /// Optional second coupling traced along the curve; absent means a single point.
    std::optional<LevelPair> along;
    double along_lo = 0.0;
    double along_hi = 2.0;
    int points = 21;
};

struct SeparatrixPoint {
    std::vector<double> mu;     // full coupling vector, system transition order
    double energy = 0.0;        // common candidate energy
    double closed_form = 0.0;   // solved coupling from the closed-form energy equality
    bool global = false;        // the two regions are also the global minimum there
};

struct SeparatrixCurve {
    RegionLabel a;
    RegionLabel b;
    int order = 1;
    std::vector<SeparatrixPoint> points;
};

/// Solves E_a = E_b for the coupling `sweep.solve_for` by coarse scan plus
/// bisection (to 1e-10). Points without a root are skipped; throws
/// NotFoundError if no point has one and ConfigError for identical or unknown pairs.
SeparatrixCurve collective_boundary(const AtomicSystem& system, LevelPair a, LevelPair b,
                                    const SweepSpec& sweep);

/// Closed-form coupling for pair `p` at which its candidate energy equals `energy`
/// (taking the branch on which the candidate exists). nullopt if unreachable.
std::optional<double> coupling_for_energy(const AtomicSystem& system, LevelPair p, double energy);

struct GridAxis {
    LevelPair pair;
    double lo = 0.0;
    double hi = 2.0;
    int points = 2;

    double value(int i) const;
};

struct GridCell {
    std::vector<double> coords;  // one value per axis
    RegionLabel label;
    double energy = 0.0;
};

struct PhaseGrid {
    std::vector<GridAxis> axes;
    std::vector<GridCell> cells;  // row-major, last axis fastest

    std::size_t index(const std::vector<int>& idx) const;
    std::vector<RegionLabel> labels() const;  // distinct, in first-seen order
};

/// Evaluates minimize on every cell of the 1..3 axis product grid.
PhaseGrid scan_grid(const AtomicSystem& system, const std::vector<GridAxis>& axes);

/// System with the axis couplings of a cell applied.
AtomicSystem system_at(const AtomicSystem& system, const std::vector<GridAxis>& axes,
                       const std::vector<double>& coords);

/// CSV body: header `mu_j_k,...,region,energy` then one row per cell.
void write_grid_csv(const PhaseGrid& grid, std::ostream& out);
nlohmann::json separatrix_to_json(const SeparatrixCurve& curve);

}  // namespace polydicke
