#include "polydicke/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "polydicke/errors.hpp"

namespace polydicke {

std::string LevelPair::label() const { return std::to_string(j) + "_" + std::to_string(k); }

LevelPair parse_pair(const std::string& text) {
    LevelPair pair{0, 0};
    auto sep = text.find_first_of("-_,");
    try {
        if (sep != std::string::npos) {
            pair.j = std::stoi(text.substr(0, sep));
            pair.k = std::stoi(text.substr(sep + 1));
        } else if (text.size() == 2 && std::isdigit(static_cast<unsigned char>(text[0])) &&
                   std::isdigit(static_cast<unsigned char>(text[1]))) {
            pair.j = text[0] - '0';
            pair.k = text[1] - '0';
        } else {
            throw ConfigError("cannot parse level pair '" + text + "'");
        }
    } catch (const std::logic_error&) {
        throw ConfigError("cannot parse level pair '" + text + "'");
    }
    if (pair.j < 1 || pair.k <= pair.j) {
        throw ConfigError("level pair '" + text + "' must satisfy 1 <= j < k");
    }
    return pair;
}

AtomicSystem::AtomicSystem(std::vector<double> omega, std::vector<Transition> transitions, int atom_count)
    : omega_(std::move(omega)), transitions_(std::move(transitions)), atom_count_(atom_count) {
    std::stable_sort(transitions_.begin(), transitions_.end(),
                     [](const Transition& a, const Transition& b) { return a.pair < b.pair; });
}

std::optional<std::size_t> AtomicSystem::index_of(LevelPair pair) const {
    for (std::size_t m = 0; m < transitions_.size(); ++m) {
        if (transitions_[m].pair == pair) return m;
    }
    return std::nullopt;
}

const Transition& AtomicSystem::transition(LevelPair pair) const {
    auto m = index_of(pair);
    if (!m) throw ConfigError("transition " + pair.label() + " is not part of the system");
    return transitions_[*m];
}

AtomicSystem AtomicSystem::with_mu(LevelPair pair, double mu) const {
    auto m = index_of(pair);
    if (!m) throw ConfigError("transition " + pair.label() + " is not part of the system");
    AtomicSystem copy = *this;
    copy.transitions_[*m].mu = mu;
    return copy;
}

AtomicSystem AtomicSystem::with_atom_count(int atom_count) const {
    AtomicSystem copy = *this;
    copy.atom_count_ = atom_count;
    return copy;
}

ValidationReport validate(const AtomicSystem& system) {
    ValidationReport report;
    const int n = system.levels();
    if (n < 2) report.violations.push_back("at least two levels are required");
    if (n >= 1 && system.omega(1) != 0.0) report.violations.push_back("level 1 energy must be 0");
    for (int l = 1; l < n; ++l) {
        if (!(system.omega(l) < system.omega(l + 1))) {
            report.violations.push_back("levels not strictly increasing");
            break;
        }
    }
    for (double w : system.omegas()) {
        if (!std::isfinite(w)) {
            report.violations.push_back("level energies must be finite");
            break;
        }
    }
    if (system.atom_count() < 1) report.violations.push_back("atom_count must be positive");

    std::set<LevelPair> seen;
    for (const auto& t : system.transitions()) {
        const std::string name = "transition " + t.pair.label();
        if (t.pair.j < 1 || t.pair.k <= t.pair.j || t.pair.k > n) {
            report.violations.push_back(name + ": levels out of range");
        }
        if (!(t.Omega > 0.0) || !std::isfinite(t.Omega)) report.violations.push_back(name + ": Omega must be positive");
        if (!(t.mu >= 0.0) || !std::isfinite(t.mu)) report.violations.push_back(name + ": mu must be non-negative");
        if (!seen.insert(t.pair).second) report.violations.push_back(name + ": pair served by two modes");
    }
    if (n >= 2 && static_cast<int>(system.mode_count()) > lmax(n)) {
        report.notices.push_back("number of modes exceeds lmax(" + std::to_string(n) +
                                 ") = " + std::to_string(lmax(n)));
    }
    return report;
}

void require_valid(const AtomicSystem& system) {
    auto report = validate(system);
    if (report.ok()) return;
    std::ostringstream msg;
    msg << "invalid atomic system:";
    for (const auto& v : report.violations) msg << "\n  - " << v;
    throw ConfigError(msg.str());
}

int lmax(int n) {
    if (n < 2) throw ConfigError("lmax requires n >= 2");
    return n * (n - 1) / 2 - (n - 2);
}

AtomicSystem system_from_json(const nlohmann::json& doc) {
    try {
        std::vector<double> omega = doc.at("omega").get<std::vector<double>>();
        if (doc.contains("n") && doc.at("n").get<int>() != static_cast<int>(omega.size())) {
            throw ConfigError("'n' does not match the length of 'omega'");
        }
        std::vector<Transition> transitions;
        for (const auto& t : doc.at("transitions")) {
            transitions.push_back(Transition{
                LevelPair{t.at("j").get<int>(), t.at("k").get<int>()},
                t.at("Omega").get<double>(),
                t.value("mu", 0.0),
            });
        }
        int atom_count = doc.value("atom_count", 1);
        return AtomicSystem(std::move(omega), std::move(transitions), atom_count);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed system description: ") + e.what());
    }
}

nlohmann::json system_to_json(const AtomicSystem& system) {
    nlohmann::json doc;
    doc["n"] = system.levels();
    doc["omega"] = std::vector<double>(system.omegas().begin(), system.omegas().end());
    doc["transitions"] = nlohmann::json::array();
    for (const auto& t : system.transitions()) {
        doc["transitions"].push_back({{"j", t.pair.j}, {"k", t.pair.k}, {"Omega", t.Omega}, {"mu", t.mu}});
    }
    doc["atom_count"] = system.atom_count();
    return doc;
}

AtomicSystem load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open system file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("system file '" + path + "' is not valid JSON: " + e.what());
    }
    return system_from_json(doc);
}

namespace presets {

AtomicSystem xi3(double mu12, double mu23) {
    return AtomicSystem({0.0, 1.0, 1.3}, {{{1, 2}, 1.0, mu12}, {{2, 3}, 0.5, mu23}});
}

AtomicSystem v3(double mu12, double mu13) {
    return AtomicSystem({0.0, 0.8, 1.0}, {{{1, 2}, 0.8, mu12}, {{1, 3}, 1.0, mu13}});
}

AtomicSystem lambda3(double mu13, double mu23) {
    return AtomicSystem({0.0, 0.2, 1.0}, {{{1, 3}, 1.0, mu13}, {{2, 3}, 0.8, mu23}});
}

AtomicSystem xi4(double mu12, double mu23, double mu34) {
    return AtomicSystem({0.0, 1.0, 1.7, 2.0},
                        {{{1, 2}, 1.0, mu12}, {{2, 3}, 0.7, mu23}, {{3, 4}, 0.3, mu34}});
}

}  // namespace presets

}  // namespace polydicke
