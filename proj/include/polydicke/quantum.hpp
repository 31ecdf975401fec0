#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <json.hpp>

#include "polydicke/fock.hpp"
#include "polydicke/model.hpp"

namespace polydicke {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Occupation basis ordered lexicographically in (photons..., atoms...).
class TruncatedBasis {
public:
    TruncatedBasis(int levels, int atom_count, std::vector<int> cutoffs);

    std::size_t size() const { return photon_states_ * atom_states_.size(); }
    int levels() const { return levels_; }
    int atom_count() const { return atom_count_; }
    const std::vector<int>& cutoffs() const { return cutoffs_; }

    FockKet ket(std::size_t index) const;
    /// Photon number of mode m in state `index`, without building the ket.
    int photons(std::size_t index, std::size_t mode) const;
    const std::vector<int>& atoms(std::size_t index) const { return atom_states_[index % atom_states_.size()]; }
    /// Exact inverse of ket(); nullopt for kets outside the truncation.
    std::optional<std::size_t> index_of(const FockKet& ket) const;

    /// Product of (cutoff + 1) times C(N_a + n - 1, n - 1), as a double.
    static double predicted_size(int levels, int atom_count, const std::vector<int>& cutoffs);

private:
    int levels_;
    int atom_count_;
    std::vector<int> cutoffs_;
    std::size_t photon_states_ = 1;
    std::vector<std::vector<int>> atom_states_;
    std::map<std::vector<int>, std::size_t> atom_rank_;
};

/// Rejects bases with more than `max_states` states (BudgetError).
TruncatedBasis build_basis(const AtomicSystem& system, int atom_count, const std::vector<int>& cutoffs,
                           std::size_t max_states = 4'000'000);

struct SparseHamiltonian {
    SparseMatrix matrix;  // symmetric, both triangles stored

    std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
    std::vector<Eigen::Triplet<double>> triplets() const;
};

/// H = sum Omega nu + sum omega_j A_jj - sum (mu/sqrt(N_a)) (A_jk + A_kj)(a + a^dag).
/// With `rwa`, only A_jk a^dag + A_kj a is kept. Elements leaving the truncation are dropped.
SparseHamiltonian build_hamiltonian(const AtomicSystem& system, const TruncatedBasis& basis, bool rwa);

struct SymmetrySector {
    std::string label;                 // parities of K_2..K_n
    std::vector<std::size_t> indices;  // ascending basis indices
};

/// Partition by the parities of the charges K_2..K_n; empty sectors are omitted
/// and the rest ordered by label.
std::vector<SymmetrySector> split_sectors(const AtomicSystem& system, const TruncatedBasis& basis);

struct SolverConfig {
    std::size_t dense_threshold = 400;  // dense solve at or below this dimension
    int krylov_dim = 40;
    double tolerance = 1e-10;           // absolute residual norm
    int max_restarts = 3000;
    std::uint64_t seed = 1;
    double boundary_threshold = 1e-8;
    std::size_t max_states = 4'000'000;
};

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;
    double residual = 0.0;
};

EigenPair lowest_eigenpair_dense(const SparseMatrix& matrix);
/// Thick-restart Lanczos with full reorthogonalization. Throws ConvergenceError.
EigenPair lowest_eigenpair_lanczos(const SparseMatrix& matrix, const SolverConfig& config);
EigenPair lowest_eigenpair(const SparseMatrix& matrix, const SolverConfig& config);

/// Principal submatrix on the given (ascending) indices.
SparseMatrix restrict_to(const SparseMatrix& matrix, const std::vector<std::size_t>& indices);

struct QuantumGroundResult {
    double energy = 0.0;  // per particle
    std::string sector;
    std::vector<std::string> degenerate_sectors;
    std::map<std::string, double> sector_energies;  // per particle
    Eigen::VectorXd vector;                         // over the full basis
    std::vector<double> nu;                         // <nu_m> / N_a per transition
    std::vector<double> pop;                        // <A_jj> / N_a per level
    double boundary_weight = 0.0;
    std::vector<double> mode_boundary_weight;
    double residual = 0.0;
    bool truncation_converged = true;
    std::vector<int> cutoffs;
    int atom_count = 1;
    bool rwa = false;
};

QuantumGroundResult ground_state(const AtomicSystem& system, int atom_count, const std::vector<int>& cutoffs,
                                 bool rwa = false, const SolverConfig& config = {});

/// (<nu_b> - <nu_a>) / (<nu_b> + <nu_a>); nullopt when the sum is below 1e-12 per particle.
std::optional<double> delta_nu(const AtomicSystem& system, const QuantumGroundResult& result, LevelPair a,
                               LevelPair b);

struct CutoffStep {
    std::vector<int> cutoffs;
    double energy;
    double boundary_weight;
};

struct CutoffConvergence {
    std::vector<int> cutoffs;
    QuantumGroundResult result;
    std::vector<CutoffStep> history;
};

/// Doubles the cutoffs of coupled modes until two successive energies per
/// particle differ by less than `tolerance` and the boundary weight is below
/// threshold. Modes whose own boundary weight is above threshold are doubled
/// first; if none is, every coupled mode is doubled.
CutoffConvergence converge_cutoff(const AtomicSystem& system, int atom_count, std::vector<int> start_cutoffs,
                                  double tolerance, bool rwa = false, const SolverConfig& config = {});

/// Truncated product coherent state with per-particle field radii r_m (real)
/// and real matter amplitudes rho_2..rho_n, normalized on the basis.
Eigen::VectorXd product_state_vector(const AtomicSystem& system, const TruncatedBasis& basis,
                                     const std::vector<double>& field_radius, const std::vector<double>& rho);

/// delta_nu uses the first two transitions (null when undefined or fewer than two).
nlohmann::json result_to_json(const AtomicSystem& system, const QuantumGroundResult& result);

}  // namespace polydicke
