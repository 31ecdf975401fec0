#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace polydicke {

/// Unordered pair of atomic levels (1-based, j < k) served by one field mode.
struct LevelPair {
    int j = 1;
    int k = 2;

    auto operator<=>(const LevelPair&) const = default;

    /// "j_k", as used in CSV headers and region names.
    std::string label() const;
};

/// Parses "1-2", "1_2" or "12" (single digits) into a pair.
LevelPair parse_pair(const std::string& text);

struct Transition {
    LevelPair pair;
    double Omega = 1.0;  // mode frequency
    double mu = 0.0;     // dipolar strength; 0 means the transition is absent
};

/// Problem instance: n level energies, the dipolar transitions and the atom count.
///
/// The constructor only stores (transitions are put in ascending pair order);
/// use validate() for a report or require_valid() to reject bad instances.
class AtomicSystem {
public:
    AtomicSystem() = default;
    AtomicSystem(std::vector<double> omega, std::vector<Transition> transitions, int atom_count = 1);

    int levels() const { return static_cast<int>(omega_.size()); }
    double omega(int level) const { return omega_.at(static_cast<std::size_t>(level - 1)); }
    std::span<const double> omegas() const { return omega_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    std::size_t mode_count() const { return transitions_.size(); }
    int atom_count() const { return atom_count_; }

    std::optional<std::size_t> index_of(LevelPair pair) const;
    const Transition& transition(LevelPair pair) const;

    AtomicSystem with_mu(LevelPair pair, double mu) const;
    AtomicSystem with_atom_count(int atom_count) const;

private:
    std::vector<double> omega_;
    std::vector<Transition> transitions_;
    int atom_count_ = 1;
};

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> notices;  // non-fatal, e.g. more modes than lmax

    bool ok() const { return violations.empty(); }
};

ValidationReport validate(const AtomicSystem& system);

/// Throws ConfigError listing every violation.
void require_valid(const AtomicSystem& system);

/// Maximum number of dipolar strengths of an n-level atom: n(n-1)/2 - (n-2).
int lmax(int n);

AtomicSystem system_from_json(const nlohmann::json& doc);
nlohmann::json system_to_json(const AtomicSystem& system);
AtomicSystem load_system(const std::string& path);

/// Parameter sets of the reference configurations. Couplings not given are 0.
namespace presets {
AtomicSystem xi3(double mu12 = 0.0, double mu23 = 0.0);
AtomicSystem v3(double mu12 = 0.0, double mu13 = 0.0);
AtomicSystem lambda3(double mu13 = 0.0, double mu23 = 0.0);
AtomicSystem xi4(double mu12 = 0.0, double mu23 = 0.0, double mu34 = 0.0);
}  // namespace presets

}  // namespace polydicke
