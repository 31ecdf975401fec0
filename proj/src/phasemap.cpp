#include "polydicke/phasemap.hpp"

#include <algorithm>
#include <cmath>

#include "polydicke/errors.hpp"
#include "polydicke/io.hpp"
#include "polydicke/parallel.hpp"

namespace polydicke {

RegionLabel RegionLabel::parse(const std::string& text) {
    if (text == "N") return normal();
    if (text.size() > 2 && text[0] == 'S') {
        return collective(parse_pair(text.substr(text[1] == '_' ? 2 : 1)));
    }
    throw ConfigError("unknown region label '" + text + "'");
}

std::string RegionLabel::name() const { return pair ? "S_" + pair->label() : "N"; }

double normal_boundary(const AtomicSystem& system, LevelPair pair) {
    const auto& t = system.transition(pair);
    if (pair.j == 1) return std::sqrt(system.omega(pair.k) * t.Omega) / 2.0;
    return std::sqrt(t.Omega) * (std::sqrt(system.omega(pair.j)) + std::sqrt(system.omega(pair.k))) / 2.0;
}

int transition_order(const RegionLabel& a, const RegionLabel& b) {
    if (a == b) throw std::invalid_argument("transition_order needs two distinct regions");
    if (a.is_normal() || b.is_normal()) {
        const LevelPair p = a.is_normal() ? *b.pair : *a.pair;
        return p.j == 1 ? 2 : 1;
    }
    return 1;
}

CouplingPath line_path(const AtomicSystem& system, LevelPair pair) {
    system.transition(pair);
    return [system, pair](double t) { return system.with_mu(pair, t); };
}

CouplingPath angle_path(const AtomicSystem& system, LevelPair a, LevelPair b, double radius) {
    system.transition(a);
    system.transition(b);
    return [system, a, b, radius](double t) {
        return system.with_mu(a, radius * std::cos(t)).with_mu(b, radius * std::sin(t));
    };
}

namespace {

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// One-sided k-th derivative with two rounds of Richardson extrapolation.
double one_sided_derivative(const std::function<double(double)>& f, double t0, int order, double dir) {
    constexpr double kSteps[3] = {1e-2, 5e-3, 2.5e-3};
    double d[3];
    for (int s = 0; s < 3; ++s) {
        const double h = dir * kSteps[s];
        double sum = 0.0;
        for (int i = 0; i <= order; ++i) {
            const double sign = ((order - i) % 2 == 0) ? 1.0 : -1.0;
            sum += sign * binomial(order, i) * f(t0 + i * h);
        }
        d[s] = sum / std::pow(h, order);
    }
    const double r0 = 2.0 * d[1] - d[0];
    const double r1 = 2.0 * d[2] - d[1];
    return (4.0 * r1 - r0) / 3.0;
}

}  // namespace

int ehrenfest_probe(const CouplingPath& path, double t0, int max_order) {
    if (max_order < 1) throw std::invalid_argument("max_order must be at least 1");
    const std::function<double(double)> f = [&](double t) { return minimize(path(t)).energy; };
    for (int k = 1; k <= max_order; ++k) {
        const double plus = one_sided_derivative(f, t0, k, +1.0);
        const double minus = one_sided_derivative(f, t0, k, -1.0);
        const double scale = std::max({1.0, std::abs(plus), std::abs(minus)});
        if (std::abs(plus - minus) > 1e-3 * scale) return k;
    }
    throw NotFoundError("no discontinuity up to order " + std::to_string(max_order));
}

// ---------------------------------------------------------------------------

namespace {

VariationalCandidate candidate_of(const AtomicSystem& system, LevelPair p) {
    for (const auto& c : candidates(system)) {
        if (c.pair == p) return c;
    }
    throw ConfigError("transition " + p.label() + " is not part of the system");
}

}  // namespace

std::optional<double> coupling_for_energy(const AtomicSystem& system, LevelPair p, double energy) {
    const auto& t = system.transition(p);
    const double a = system.omega(p.j) - energy;
    const double b = system.omega(p.k) - energy;
    if (a < 0.0) return std::nullopt;
    return std::sqrt(t.Omega) * (std::sqrt(a) + std::sqrt(b)) / 2.0;
}

SeparatrixCurve collective_boundary(const AtomicSystem& system, LevelPair a, LevelPair b,
                                    const SweepSpec& sweep) {
    if (a == b) throw ConfigError("identical regions: " + a.label());
    system.transition(a);
    system.transition(b);
    if (sweep.solve_for != a && sweep.solve_for != b) {
        throw ConfigError("the solved coupling must belong to one of the two regions");
    }
    if (sweep.along) system.transition(*sweep.along);
    if (!(sweep.hi > sweep.lo)) throw ConfigError("sweep range must have hi > lo");

    SeparatrixCurve curve{RegionLabel::collective(a), RegionLabel::collective(b), 1, {}};
    const int along_points = sweep.along ? std::max(sweep.points, 1) : 1;

    for (int i = 0; i < along_points; ++i) {
        AtomicSystem base = system;
        if (sweep.along) {
            const double v = along_points == 1 ? sweep.along_lo
                                               : sweep.along_lo + (sweep.along_hi - sweep.along_lo) * i / (along_points - 1);
            base = base.with_mu(*sweep.along, v);
        }
        auto diff = [&](double mu) {
            const auto s = base.with_mu(sweep.solve_for, mu);
            return candidate_of(s, a).energy - candidate_of(s, b).energy;
        };

        constexpr int kScan = 400;
        double x0 = sweep.lo;
        double f0 = diff(x0);
        for (int s = 1; s <= kScan; ++s) {
            const double x1 = sweep.lo + (sweep.hi - sweep.lo) * s / kScan;
            const double f1 = diff(x1);
            if (f1 == 0.0) continue;
            if (f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) {
                double lo = x0, hi = x1, flo = f0;
                while (hi - lo > 1e-10) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = diff(mid);
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                const double root = 0.5 * (lo + hi);
                const auto s_root = base.with_mu(sweep.solve_for, root);
                const auto ca = candidate_of(s_root, a);
                const auto cb = candidate_of(s_root, b);
                if (ca.exists && cb.exists) {
                    SeparatrixPoint pt;
                    for (const auto& t : s_root.transitions()) pt.mu.push_back(t.mu);
                    pt.energy = 0.5 * (ca.energy + cb.energy);
                    const double target = (sweep.solve_for == a ? cb : ca).energy;
                    pt.closed_form = coupling_for_energy(s_root, sweep.solve_for, target).value_or(root);
                    pt.global = minimize(s_root).energy >= std::min(ca.energy, cb.energy) - 1e-9;
                    curve.points.push_back(std::move(pt));
                    break;
                }
            }
            x0 = x1;
            f0 = f1;
        }
    }
    if (curve.points.empty()) {
        throw NotFoundError("no root of E_" + a.label() + " = E_" + b.label() + " in the sweep range");
    }
    return curve;
}

// ---------------------------------------------------------------------------

double GridAxis::value(int i) const {
    if (points <= 1) return lo;
    return lo + (hi - lo) * i / (points - 1);
}

std::size_t PhaseGrid::index(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < axes.size(); ++a) flat = flat * static_cast<std::size_t>(axes[a].points) + idx[a];
    return flat;
}

std::vector<RegionLabel> PhaseGrid::labels() const {
    std::vector<RegionLabel> out;
    for (const auto& c : cells) {
        if (std::find(out.begin(), out.end(), c.label) == out.end()) out.push_back(c.label);
    }
    return out;
}

AtomicSystem system_at(const AtomicSystem& system, const std::vector<GridAxis>& axes,
                       const std::vector<double>& coords) {
    AtomicSystem s = system;
    for (std::size_t a = 0; a < axes.size(); ++a) s = s.with_mu(axes[a].pair, coords[a]);
    return s;
}

PhaseGrid scan_grid(const AtomicSystem& system, const std::vector<GridAxis>& axes) {
    require_valid(system);
    if (axes.empty() || axes.size() > 3) throw ConfigError("a scan needs 1 to 3 axes");
    std::size_t total = 1;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        if (axes[a].points < 1) throw ConfigError("grid resolution must be positive");
        system.transition(axes[a].pair);
        for (std::size_t b = 0; b < a; ++b) {
            if (axes[b].pair == axes[a].pair) throw ConfigError("axis " + axes[a].pair.label() + " given twice");
        }
        total *= static_cast<std::size_t>(axes[a].points);
    }

    PhaseGrid grid{axes, std::vector<GridCell>(total)};
    parallel_for(total, [&](std::size_t flat) {
        std::vector<double> coords(axes.size());
        std::size_t rest = flat;
        for (std::size_t a = axes.size(); a-- > 0;) {
            const auto n = static_cast<std::size_t>(axes[a].points);
            coords[a] = axes[a].value(static_cast<int>(rest % n));
            rest /= n;
        }
        const auto best = minimize(system_at(system, axes, coords));
        grid.cells[flat] = GridCell{std::move(coords), RegionLabel::of(best), best.energy};
    });
    return grid;
}

void write_grid_csv(const PhaseGrid& grid, std::ostream& out) {
    for (const auto& axis : grid.axes) out << "mu_" << axis.pair.label() << ',';
    out << "region,energy\n";
    for (const auto& cell : grid.cells) {
        for (double c : cell.coords) out << format_number(c) << ',';
        out << cell.label.name() << ',' << format_number(cell.energy) << '\n';
    }
}

nlohmann::json separatrix_to_json(const SeparatrixCurve& curve) {
    nlohmann::json doc;
    doc["regions"] = {curve.a.name(), curve.b.name()};
    doc["order"] = curve.order;
    doc["points"] = nlohmann::json::array();
    for (const auto& p : curve.points) {
        doc["points"].push_back({{"mu", p.mu}, {"energy", p.energy}, {"closed_form", p.closed_form},
                                 {"global", p.global}});
    }
    return doc;
}

}  // namespace polydicke
