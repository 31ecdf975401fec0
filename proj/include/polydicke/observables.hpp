#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "polydicke/model.hpp"
#include "polydicke/varsurface.hpp"

namespace polydicke {

/// Per-particle expectation values of the variational ground state.
struct ObservableSet {
    std::vector<double> nu;        // photons per particle, per transition
    std::vector<double> var_nu;    // photon variance per particle, per transition
    std::vector<double> pop;       // population per particle, per level
    std::vector<double> var_pop;   // population variance per particle, per level
    std::vector<double> coh;       // |<A_jk>| / N_a, per transition
    std::vector<double> coh_phase; // 0 for the canonical phase choice
};

ObservableSet expectations(const AtomicSystem& system, const VariationalCandidate& candidate);

/// Poisson photon-number distribution P(0..count) of the active mode for N_a atoms.
std::vector<double> photon_distribution(const VariationalCandidate& candidate, int atom_count, int count);

/// Binomial distribution over x = number of atoms in the upper level of the
/// active pair, x = 0..N_a.
std::vector<double> matter_distribution(const AtomicSystem& system, const VariationalCandidate& candidate,
                                        int atom_count);

/// <nu_jk> - 4 (mu/Omega)^2 (Delta A_jj)^2 for an S(j,k) candidate.
double universal_relation_residual(const AtomicSystem& system, const VariationalCandidate& candidate);

/// Expectation of a product of a matter observable and a field observable in
/// the variational product state; equals the product of the factors.
double joint_moment_matter_photon(const AtomicSystem& system, const VariationalCandidate& candidate,
                                  int level, int atom_count);

/// CSV header `region,pair,nu,pop_1..pop_n,coh,var_pop` (prefix columns optional).
void write_observables_header(const AtomicSystem& system, std::ostream& out,
                              const std::vector<std::string>& prefix = {});
void write_observables_row(const AtomicSystem& system, const VariationalCandidate& candidate,
                           const ObservableSet& obs, std::ostream& out, const std::vector<double>& prefix = {});

}  // namespace polydicke
