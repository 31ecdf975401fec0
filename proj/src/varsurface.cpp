#include "polydicke/varsurface.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

#include "polydicke/errors.hpp"

namespace polydicke {

namespace {

void check_matter_size(const AtomicSystem& system, std::size_t size) {
    if (size != static_cast<std::size_t>(system.levels() - 1)) {
        throw std::invalid_argument("matter amplitudes must have one entry per level 2..n");
    }
}

void check_finite(std::span<const double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("amplitudes must be finite");
    }
}

// Amplitude of a level given rho for levels 2..n (level 1 pinned to 1).
double level_amp(std::span<const double> rho, int level) {
    return level == 1 ? 1.0 : rho[static_cast<std::size_t>(level - 2)];
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

double MatterAmplitudes::r0_squared() const {
    double s = 0.0;
    for (double r : radius) s += r * r;
    return s;
}

double energy_surface_full(const AtomicSystem& system, const FieldAmplitudes& field,
                           const MatterAmplitudes& matter) {
    check_matter_size(system, matter.radius.size());
    if (matter.phase.size() != matter.radius.size() || field.radius.size() != system.mode_count() ||
        field.phase.size() != system.mode_count()) {
        throw std::invalid_argument("amplitude dimensions do not match the system");
    }
    const double denom = 1.0 + matter.r0_squared();
    auto phase_of = [&](int level) {
        return level == 1 ? 0.0 : matter.phase[static_cast<std::size_t>(level - 2)];
    };

    double e = 0.0;
    for (int l = 2; l <= system.levels(); ++l) {
        double rho = matter.radius[static_cast<std::size_t>(l - 2)];
        e += system.omega(l) * rho * rho / denom;
    }
    for (std::size_t m = 0; m < system.mode_count(); ++m) {
        const auto& t = system.transitions()[m];
        const double r = field.radius[m];
        e += t.Omega * r * r;
        const double rj = level_amp(matter.radius, t.pair.j);
        const double rk = level_amp(matter.radius, t.pair.k);
        e -= 4.0 * t.mu * r * rj * rk * std::cos(field.phase[m]) *
             std::cos(phase_of(t.pair.k) - phase_of(t.pair.j)) / denom;
    }
    return e;
}

PhaseAssignment optimal_phases(const AtomicSystem& system) {
    return PhaseAssignment{std::vector<double>(system.mode_count(), 0.0),
                           std::vector<double>(static_cast<std::size_t>(system.levels() - 1), 0.0)};
}

std::vector<double> photon_stationary_r(const AtomicSystem& system, std::span<const double> rho) {
    check_matter_size(system, rho.size());
    double denom = 1.0;
    for (double r : rho) denom += r * r;
    std::vector<double> out;
    out.reserve(system.mode_count());
    for (const auto& t : system.transitions()) {
        out.push_back(2.0 * t.mu * level_amp(rho, t.pair.j) * level_amp(rho, t.pair.k) / (t.Omega * denom));
    }
    return out;
}

// ---------------------------------------------------------------------------
// ReducedSurface

ReducedSurface::ReducedSurface(const AtomicSystem& system) : ReducedSurface(system, {}, 1) {}

ReducedSurface::ReducedSurface(const AtomicSystem& system, std::vector<int> levels, int anchor)
    : system_(&system), levels_(std::move(levels)), anchor_(anchor) {
    if (levels_.empty()) {
        levels_.resize(static_cast<std::size_t>(system.levels()));
        std::iota(levels_.begin(), levels_.end(), 1);
    }
    for (int l : levels_) {
        if (l != anchor_) free_.push_back(l);
    }
}

ReducedSurface ReducedSurface::limit(const AtomicSystem& system, int anchor) {
    if (anchor < 2 || anchor > system.levels()) {
        throw std::invalid_argument("limit anchor must be one of levels 2..n");
    }
    std::vector<int> levels(static_cast<std::size_t>(system.levels() - 1));
    std::iota(levels.begin(), levels.end(), 2);
    return ReducedSurface(system, std::move(levels), anchor);
}

ReducedSurface reduce_to_subsystem(const AtomicSystem& system, int anchor) {
    return ReducedSurface::limit(system, anchor);
}

// Full amplitude vector indexed by level-1 (levels outside the surface stay 0).
std::vector<double> ReducedSurface::amplitudes(std::span<const double> x) const {
    if (x.size() != free_.size()) throw std::invalid_argument("coordinate count does not match the surface");
    check_finite(x);
    std::vector<double> y(static_cast<std::size_t>(system_->levels()), 0.0);
    y[static_cast<std::size_t>(anchor_ - 1)] = 1.0;
    for (std::size_t i = 0; i < free_.size(); ++i) y[static_cast<std::size_t>(free_[i] - 1)] = x[i];
    return y;
}

double ReducedSurface::energy(std::span<const double> x) const {
    const auto y = amplitudes(x);
    double denom = 0.0;
    double diag = 0.0;
    for (int l : levels_) {
        const double a2 = y[l - 1] * y[l - 1];
        denom += a2;
        diag += system_->omega(l) * a2;
    }
    double coupling = 0.0;
    for (const auto& t : system_->transitions()) {
        const double q = y[t.pair.j - 1] * y[t.pair.k - 1] / denom;
        coupling += t.mu * t.mu / t.Omega * q * q;
    }
    return diag / denom - 4.0 * coupling;
}

std::vector<double> ReducedSurface::gradient(std::span<const double> x) const {
    const auto y = amplitudes(x);
    const std::size_t n = y.size();
    double denom = 0.0;
    double mean_omega = 0.0;
    for (int l : levels_) {
        denom += y[l - 1] * y[l - 1];
        mean_omega += system_->omega(l) * y[l - 1] * y[l - 1];
    }
    mean_omega /= denom;

    // neighbour[l] = sum over transitions touching l of (mu^2/Omega) y_other^2 / D
    std::vector<double> neighbour(n, 0.0);
    double pair_sum = 0.0;
    for (const auto& t : system_->transitions()) {
        const double c = t.mu * t.mu / t.Omega;
        const double yj2 = y[t.pair.j - 1] * y[t.pair.j - 1];
        const double yk2 = y[t.pair.k - 1] * y[t.pair.k - 1];
        neighbour[t.pair.j - 1] += c * yk2 / denom;
        neighbour[t.pair.k - 1] += c * yj2 / denom;
        pair_sum += c * yj2 * yk2 / (denom * denom);
    }

    std::vector<double> g;
    g.reserve(free_.size());
    for (int l : free_) {
        const double bracket = system_->omega(l) - mean_omega - 4.0 * neighbour[l - 1] + 8.0 * pair_sum;
        g.push_back(2.0 * y[l - 1] / denom * bracket);
    }
    return g;
}

double reduced_energy(const AtomicSystem& system, std::span<const double> rho) {
    check_matter_size(system, rho.size());
    return ReducedSurface(system).energy(rho);
}

std::vector<double> gradient(const AtomicSystem& system, std::span<const double> rho) {
    check_matter_size(system, rho.size());
    return ReducedSurface(system).gradient(rho);
}

// ---------------------------------------------------------------------------
// Closed-form critical points

namespace {

VariationalCandidate pair_candidate(const AtomicSystem& system, const Transition& t) {
    VariationalCandidate c;
    c.kind = t.pair.j == 1 ? CandidateKind::Low : CandidateKind::High;
    c.pair = t.pair;
    const double wj = system.omega(t.pair.j);
    const double gap = system.omega(t.pair.k) - wj;
    const double four_mu2 = 4.0 * t.mu * t.mu;
    c.exists = t.mu > 0.0 && four_mu2 >= gap * t.Omega;
    if (!c.exists) {
        // Continuous extension: the reduced two-level problem sits at its vertex.
        c.energy = wj;
        return c;
    }
    const double excess = four_mu2 - gap * t.Omega;
    const double x = std::sqrt(excess / (four_mu2 + gap * t.Omega));
    c.matter_amp = x;
    c.photon_amp = 2.0 * t.mu * x / (t.Omega * (1.0 + x * x));
    c.energy = wj - excess * excess / (16.0 * t.Omega * t.mu * t.mu);
    return c;
}

}  // namespace

std::vector<VariationalCandidate> candidates(const AtomicSystem& system) {
    require_valid(system);
    std::vector<VariationalCandidate> out;
    out.reserve(system.mode_count() + 1);
    out.push_back(VariationalCandidate{});
    for (const auto& t : system.transitions()) {
        if (t.pair.j == 1) out.push_back(pair_candidate(system, t));
    }
    for (const auto& t : system.transitions()) {
        if (t.pair.j != 1) out.push_back(pair_candidate(system, t));
    }
    return out;
}

VariationalCandidate minimize(const AtomicSystem& system) {
    const auto all = candidates(system);
    const VariationalCandidate* best = &all.front();
    for (const auto& c : all) {
        if (c.exists && c.energy < best->energy) best = &c;
    }
    return *best;
}

// ---------------------------------------------------------------------------
// Numeric oracle: spectral projected gradient in w = asinh(rho) coordinates.

namespace {

struct SpgResult {
    std::vector<double> w;
    double energy;
    bool converged;
    int iterations;
};

SpgResult spg_minimize(const ReducedSurface& surface, std::vector<double> w, double upper,
                       const NumericOptions& opt) {
    const std::size_t d = w.size();
    auto to_rho = [](const std::vector<double>& ww) {
        std::vector<double> rho(ww.size());
        for (std::size_t i = 0; i < ww.size(); ++i) rho[i] = std::sinh(ww[i]);
        return rho;
    };
    auto eval = [&](const std::vector<double>& ww, std::vector<double>& grad) {
        const auto rho = to_rho(ww);
        const auto g = surface.gradient(rho);
        grad.resize(d);
        for (std::size_t i = 0; i < d; ++i) grad[i] = g[i] * std::cosh(ww[i]);
        return surface.energy(rho);
    };
    auto project = [&](double v) { return std::clamp(v, 0.0, upper); };

    constexpr int kMemory = 10;
    constexpr double kArmijo = 1e-4;
    constexpr double kMaxMove = 0.5;
    std::vector<double> g;
    double f = eval(w, g);
    std::deque<double> history{f};
    double step = 1.0;
    int stagnant = 0;

    for (int it = 0; it < opt.max_iterations; ++it) {
        double pg_norm = 0.0;
        for (std::size_t i = 0; i < d; ++i) pg_norm = std::max(pg_norm, std::abs(project(w[i] - g[i]) - w[i]));
        if (pg_norm < opt.tolerance || stagnant >= 50) return {w, f, true, it};

        // The faces rho_k = 0 are invariant under the flow, so a step is never
        // allowed to move a coordinate by more than kMaxMove in w.
        std::vector<double> dir(d);
        double longest = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            dir[i] = project(w[i] - step * g[i]) - w[i];
            longest = std::max(longest, std::abs(dir[i]));
        }
        const double shrink = longest > kMaxMove ? kMaxMove / longest : 1.0;
        double slope = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            dir[i] *= shrink;
            slope += g[i] * dir[i];
        }
        const double fmax = *std::max_element(history.begin(), history.end());
        double alpha = 1.0;
        std::vector<double> w_new(d), g_new;
        double f_new = 0.0;
        while (true) {
            for (std::size_t i = 0; i < d; ++i) w_new[i] = project(w[i] + alpha * dir[i]);
            f_new = eval(w_new, g_new);
            if (f_new <= fmax + kArmijo * alpha * slope || alpha < 1e-20) break;
            alpha *= 0.5;
        }

        double ss = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double s = w_new[i] - w[i];
            ss += s * s;
            sy += s * (g_new[i] - g[i]);
        }
        step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : 1e12;
        stagnant = std::abs(f_new - f) <= 1e-16 * (1.0 + std::abs(f)) ? stagnant + 1 : 0;

        w = std::move(w_new);
        g = std::move(g_new);
        f = f_new;
        history.push_back(f);
        if (history.size() > kMemory) history.pop_front();
    }
    return {w, f, false, opt.max_iterations};
}

}  // namespace

NumericMinimum minimize_numeric(const AtomicSystem& system, const NumericOptions& options) {
    require_valid(system);
    if (options.starts < 1) throw std::invalid_argument("minimize_numeric needs at least one start");
    if (!(options.rho_cap > 0.0)) throw std::invalid_argument("rho_cap must be positive");

    const ReducedSurface surface(system);
    const std::size_t d = surface.dim();
    const double upper = std::asinh(options.rho_cap);
    std::mt19937_64 rng(options.seed);

    NumericMinimum best;
    best.energy = std::numeric_limits<double>::infinity();
    for (int s = 0; s < options.starts; ++s) {
        // Nested boxes: early starts probe small amplitudes, later ones the far field.
        const double reach = upper * (s + 1) / options.starts;
        std::vector<double> w0(d);
        for (auto& v : w0) v = reach * uniform01(rng);
        auto result = spg_minimize(surface, std::move(w0), upper, options);
        if (result.energy < best.energy) {
            best.energy = result.energy;
            best.converged = result.converged;
            best.iterations = result.iterations;
            best.rho.resize(d);
            for (std::size_t i = 0; i < d; ++i) best.rho[i] = std::sinh(result.w[i]);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------

std::vector<double> StateRecipe::populations() const {
    if (levels.size() == 1) return {1.0};
    const double x2 = mixing * mixing;
    return {1.0 / (1.0 + x2), x2 / (1.0 + x2)};
}

StateRecipe variational_state_params(const VariationalCandidate& candidate, int atom_count) {
    if (!candidate.exists) throw std::invalid_argument("candidate does not exist at these couplings");
    if (atom_count < 1) throw std::invalid_argument("atom_count must be positive");
    StateRecipe recipe;
    recipe.atom_count = atom_count;
    if (candidate.kind == CandidateKind::Normal) {
        recipe.levels = {1};
        return recipe;
    }
    recipe.levels = {candidate.pair->j, candidate.pair->k};
    recipe.mixing = candidate.matter_amp;
    recipe.mode = candidate.pair;
    recipe.field_amplitude = std::sqrt(static_cast<double>(atom_count)) * candidate.photon_amp;
    return recipe;
}

}  // namespace polydicke
