#include "polydicke/rwa.hpp"

#include <optional>
#include <queue>

#include "polydicke/errors.hpp"

namespace polydicke {

AtomicSystem rwa_rescale(const AtomicSystem& system) {
    require_valid(system);
    AtomicSystem out = system;
    for (const auto& t : system.transitions()) out = out.with_mu(t.pair, t.mu / 2.0);
    return out;
}

ExcitationWeights excitation_weights(const AtomicSystem& system) {
    require_valid(system);
    const int n = system.levels();
    std::vector<std::optional<int>> lambda(static_cast<std::size_t>(n));
    lambda[0] = 0;
    std::queue<int> pending;
    pending.push(1);
    while (!pending.empty()) {
        const int level = pending.front();
        pending.pop();
        const int here = *lambda[static_cast<std::size_t>(level - 1)];
        for (const auto& t : system.transitions()) {
            int other = 0, value = 0;
            if (t.pair.j == level) {
                other = t.pair.k;
                value = here + 1;
            } else if (t.pair.k == level) {
                other = t.pair.j;
                value = here - 1;
            } else {
                continue;
            }
            auto& slot = lambda[static_cast<std::size_t>(other - 1)];
            if (!slot) {
                slot = value;
                pending.push(other);
            } else if (*slot != value) {
                throw ConfigError("inconsistent weights: level " + std::to_string(other) + " gets both " +
                                  std::to_string(*slot) + " and " + std::to_string(value));
            }
        }
    }
    ExcitationWeights w;
    for (int l = 1; l <= n; ++l) {
        const auto& slot = lambda[static_cast<std::size_t>(l - 1)];
        if (!slot) throw ConfigError("inconsistent weights: level " + std::to_string(l) + " is not connected");
        if (*slot < 0) throw ConfigError("inconsistent weights: level " + std::to_string(l) + " needs a negative weight");
        w.lambda.push_back(*slot);
    }
    return w;
}

SymmetryCharges make_charges(const AtomicSystem& system) {
    SymmetryCharges c;
    c.levels = system.levels();
    c.photon_coeff.assign(static_cast<std::size_t>(c.levels), std::vector<int>(system.mode_count(), 0));
    for (std::size_t m = 0; m < system.mode_count(); ++m) {
        const auto& p = system.transitions()[m].pair;
        c.photon_coeff[static_cast<std::size_t>(p.k - 1)][m] += 1;
        c.photon_coeff[static_cast<std::size_t>(p.j - 1)][m] -= 1;
    }
    return c;
}

std::vector<int> charge_of_state(const SymmetryCharges& charges, const FockKet& ket) {
    if (ket.atoms.size() != static_cast<std::size_t>(charges.levels) ||
        (charges.levels > 0 && ket.photons.size() != charges.photon_coeff[0].size())) {
        throw std::invalid_argument("ket is not dimensioned to the system");
    }
    std::vector<int> k(ket.atoms);
    for (std::size_t j = 0; j < k.size(); ++j) {
        for (std::size_t m = 0; m < ket.photons.size(); ++m) k[j] += charges.photon_coeff[j][m] * ket.photons[m];
    }
    return k;
}

int total_excitations(const ExcitationWeights& weights, const std::vector<int>& charges) {
    int total = 0;
    for (std::size_t l = 0; l < charges.size(); ++l) total += weights.lambda.at(l) * charges[l];
    return total;
}

std::string parity_label(const std::vector<int>& charges) {
    std::string label;
    for (std::size_t j = 1; j < charges.size(); ++j) label += (charges[j] % 2 == 0) ? 'e' : 'o';
    return label;
}

}  // namespace polydicke
