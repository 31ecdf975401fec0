#pragma once

#include <vector>

namespace polydicke {

/// Occupation-number ket: photons per transition (system order) and atoms per level.
struct FockKet {
    std::vector<int> photons;
    std::vector<int> atoms;

    auto operator<=>(const FockKet&) const = default;
};

}  // namespace polydicke
