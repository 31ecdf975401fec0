#pragma once

#include <string>
#include <vector>

#include "polydicke/fock.hpp"
#include "polydicke/model.hpp"

namespace polydicke {

/// Full-model system whose variational solution equals the rotating-wave one
/// of `system`: every coupling halved.
AtomicSystem rwa_rescale(const AtomicSystem& system);

/// lambda_k for every level (lambda_1 = 0), the excitation cost of lifting an
/// atom from level 1 to level k.
struct ExcitationWeights {
    std::vector<int> lambda;  // index level-1

    int of(int level) const { return lambda.at(static_cast<std::size_t>(level - 1)); }
};

/// Propagates lambda_k = lambda_j + 1 along every transition (j,k). Throws
/// ConfigError when the transitions leave a level unreachable, assign two
/// different values, or need a negative weight.
ExcitationWeights excitation_weights(const AtomicSystem& system);

/// K_j = A_jj + sum_{k<j} nu_kj - sum_{j<k} nu_jk as integer coefficients over
/// the occupation numbers of a ket.
struct SymmetryCharges {
    int levels = 0;
    // photon_coeff[j][m]: coefficient of nu_m in K_{j+1}
    std::vector<std::vector<int>> photon_coeff;
};

SymmetryCharges make_charges(const AtomicSystem& system);

/// (K_1, ..., K_n) on a basis ket.
std::vector<int> charge_of_state(const SymmetryCharges& charges, const FockKet& ket);

/// M = sum_l lambda_l K_l.
int total_excitations(const ExcitationWeights& weights, const std::vector<int>& charges);

/// Sector label from the parities of K_2..K_n, e.g. "eo".
std::string parity_label(const std::vector<int>& charges);

}  // namespace polydicke
