#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "polydicke/model.hpp"

namespace testing_helpers {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random valid system with n levels and a random non-empty set of transitions.
inline polydicke::AtomicSystem random_system(std::mt19937_64& rng, int n) {
    std::vector<double> omega{0.0};
    for (int l = 1; l < n; ++l) omega.push_back(omega.back() + uniform(rng, 0.1, 1.0));
    std::vector<polydicke::Transition> ts;
    for (int j = 1; j <= n; ++j) {
        for (int k = j + 1; k <= n; ++k) {
            if (uniform(rng, 0.0, 1.0) < 0.6 || (j == 1 && k == 2)) {
                ts.push_back({{j, k}, uniform(rng, 0.2, 1.5), uniform(rng, 0.0, 2.0)});
            }
        }
    }
    return polydicke::AtomicSystem(omega, ts);
}

// Closed-form energy of the (j,k) condensate, written out independently of the library.
inline double pair_energy(double wj, double wk, double Omega, double mu) {
    const double d = (wk - wj) * Omega - 4.0 * mu * mu;
    return wj - d * d / (16.0 * Omega * mu * mu);
}

}  // namespace testing_helpers
