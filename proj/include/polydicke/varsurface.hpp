#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polydicke/model.hpp"

namespace polydicke {

/// Coherent field parameters, one entry per transition in system order.
/// Radii are per particle (R_jk / sqrt(N_a)).
struct FieldAmplitudes {
    std::vector<double> radius;
    std::vector<double> phase;
};

/// U(n) coherent-state parameters for levels 2..n (level 1 is pinned to amplitude 1, phase 0).
struct MatterAmplitudes {
    std::vector<double> radius;
    std::vector<double> phase;

    double r0_squared() const;
};

/// Energy per particle of the product coherent state, before any elimination.
double energy_surface_full(const AtomicSystem& system, const FieldAmplitudes& field,
                           const MatterAmplitudes& matter);

struct PhaseAssignment {
    std::vector<double> field;   // theta_jk per transition
    std::vector<double> matter;  // phi_k for k = 2..n
};

/// Canonical minimizing phases: theta = 0 and equal matter phases. The set
/// {0, pi} x {0, pi} per transition is degenerate; this representative keeps
/// all coherent amplitudes real and positive.
PhaseAssignment optimal_phases(const AtomicSystem& system);

/// Stationary field radii r_jk = 2 mu rho_j rho_k / (Omega (1 + R0^2)).
std::vector<double> photon_stationary_r(const AtomicSystem& system, std::span<const double> rho);

/// Energy per particle after eliminating phases and field radii; rho holds levels 2..n.
double reduced_energy(const AtomicSystem& system, std::span<const double> rho);

/// d(reduced_energy)/d(rho_j) for j = 2..n.
std::vector<double> gradient(const AtomicSystem& system, std::span<const double> rho);

/// Reduced energy over a subset of levels with one anchor level pinned to unit
/// amplitude. The plain surface anchors level 1 over all levels; the
/// rho_anchor -> infinity limit drops level 1 and measures every other level
/// relative to the anchor, which yields an equivalent (n-1)-level problem.
class ReducedSurface {
public:
    explicit ReducedSurface(const AtomicSystem& system);
    static ReducedSurface limit(const AtomicSystem& system, int anchor);

    /// Levels whose amplitudes are the free coordinates, ascending.
    const std::vector<int>& free_levels() const { return free_; }
    std::size_t dim() const { return free_.size(); }
    int anchor() const { return anchor_; }

    double energy(std::span<const double> x) const;
    std::vector<double> gradient(std::span<const double> x) const;

private:
    ReducedSurface(const AtomicSystem& system, std::vector<int> levels, int anchor);
    std::vector<double> amplitudes(std::span<const double> x) const;

    const AtomicSystem* system_;
    std::vector<int> levels_;
    std::vector<int> free_;
    int anchor_;
};

/// Reduction to the subsystem that survives rho_anchor -> infinity.
ReducedSurface reduce_to_subsystem(const AtomicSystem& system, int anchor);

enum class CandidateKind { Normal, Low, High };

/// One closed-form critical point of the reduced surface.
///  Normal: all rho = 0.
///  Low(1,k): only rho_k nonzero; matter_amp = rho_k.
///  High(j,k), j >= 2: rho_j -> infinity with rho_k = eta_k rho_j; matter_amp = eta_k.
struct VariationalCandidate {
    CandidateKind kind = CandidateKind::Normal;
    std::optional<LevelPair> pair;
    double matter_amp = 0.0;
    double photon_amp = 0.0;  // r per particle (limit value for High)
    double energy = 0.0;
    bool exists = true;
};

/// Normal candidate followed by one candidate per transition, in ascending pair order.
std::vector<VariationalCandidate> candidates(const AtomicSystem& system);

/// Lowest existing candidate; exact ties keep the earliest in candidates() order.
VariationalCandidate minimize(const AtomicSystem& system);

struct NumericOptions {
    int starts = 16;
    double tolerance = 1e-11;     // projected-gradient norm, asinh coordinates
    double rho_cap = 1e4;         // box [0, rho_cap] per level
    std::uint64_t seed = 20150101;
    int max_iterations = 20000;
};

struct NumericMinimum {
    std::vector<double> rho;  // levels 2..n
    double energy = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Multi-start box-constrained minimization of reduced_energy. Independent of
/// the closed forms; used to check them.
NumericMinimum minimize_numeric(const AtomicSystem& system, const NumericOptions& options = {});

/// Parameters of the explicit variational ground state for a candidate.
struct StateRecipe {
    std::vector<int> levels;         // occupied levels: {1} or {j, k}
    double mixing = 0.0;             // amplitude of level k relative to level j
    std::optional<LevelPair> mode;   // the single active mode
    double field_amplitude = 0.0;    // sqrt(N_a) * r_c
    int atom_count = 1;

    /// Per-particle population of each occupied level, in `levels` order.
    std::vector<double> populations() const;
    /// Mean photon number of the active mode (total, not per particle).
    double mean_photons() const { return field_amplitude * field_amplitude; }
};

StateRecipe variational_state_params(const VariationalCandidate& candidate, int atom_count);

}  // namespace polydicke
