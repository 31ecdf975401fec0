#include "polydicke/observables.hpp"

#include <cmath>

#include "polydicke/io.hpp"

namespace polydicke {

namespace {

void require_exists(const VariationalCandidate& c) {
    if (!c.exists) throw std::invalid_argument("candidate does not exist at these couplings");
}

struct PairStats {
    double p;      // population of the lower level
    double q;      // population of the upper level
    double nu;     // photons per particle
};

PairStats pair_stats(const AtomicSystem& system, const VariationalCandidate& c) {
    const auto& t = system.transition(*c.pair);
    const double gap = system.omega(c.pair->k) - system.omega(c.pair->j);
    const double mu2 = t.mu * t.mu;
    const double ratio = gap * t.Omega / (4.0 * mu2);
    const double p = 0.5 * (1.0 + ratio);
    const double nu = mu2 / (t.Omega * t.Omega) * (1.0 - ratio * ratio);
    return {p, 1.0 - p, nu};
}

}  // namespace

ObservableSet expectations(const AtomicSystem& system, const VariationalCandidate& candidate) {
    require_exists(candidate);
    const auto n = static_cast<std::size_t>(system.levels());
    const auto m = system.mode_count();
    ObservableSet obs{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), std::vector<double>(n, 0.0),
                      std::vector<double>(n, 0.0), std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
    if (candidate.kind == CandidateKind::Normal) {
        obs.pop[0] = 1.0;
        return obs;
    }
    const auto stats = pair_stats(system, candidate);
    const auto mode = *system.index_of(*candidate.pair);
    const auto j = static_cast<std::size_t>(candidate.pair->j - 1);
    const auto k = static_cast<std::size_t>(candidate.pair->k - 1);
    obs.nu[mode] = stats.nu;
    obs.var_nu[mode] = stats.nu;
    obs.pop[j] = stats.p;
    obs.pop[k] = stats.q;
    obs.var_pop[j] = stats.p * stats.q;
    obs.var_pop[k] = stats.p * stats.q;
    obs.coh[mode] = std::sqrt(stats.p * stats.q);
    return obs;
}

std::vector<double> photon_distribution(const VariationalCandidate& candidate, int atom_count, int count) {
    require_exists(candidate);
    if (count < 0) throw std::invalid_argument("count must be non-negative");
    if (atom_count < 1) throw std::invalid_argument("atom_count must be positive");
    const double lambda = atom_count * candidate.photon_amp * candidate.photon_amp;
    std::vector<double> out(static_cast<std::size_t>(count) + 1);
    double term = std::exp(-lambda);
    for (int mm = 0; mm <= count; ++mm) {
        out[static_cast<std::size_t>(mm)] = term;
        term *= lambda / (mm + 1);
    }
    return out;
}

std::vector<double> matter_distribution(const AtomicSystem& system, const VariationalCandidate& candidate,
                                        int atom_count) {
    require_exists(candidate);
    if (atom_count < 1) throw std::invalid_argument("atom_count must be positive");
    std::vector<double> out(static_cast<std::size_t>(atom_count) + 1, 0.0);
    if (candidate.kind == CandidateKind::Normal) {
        out[0] = 1.0;
        return out;
    }
    const auto s = pair_stats(system, candidate);
    double binom = 1.0;
    for (int x = 0; x <= atom_count; ++x) {
        out[static_cast<std::size_t>(x)] = binom * std::pow(s.p, atom_count - x) * std::pow(s.q, x);
        binom = binom * (atom_count - x) / (x + 1);
    }
    return out;
}

double universal_relation_residual(const AtomicSystem& system, const VariationalCandidate& candidate) {
    require_exists(candidate);
    if (candidate.kind == CandidateKind::Normal) {
        throw std::invalid_argument("the photon-fluctuation relation is trivial in the normal region");
    }
    const auto& t = system.transition(*candidate.pair);
    const auto obs = expectations(system, candidate);
    const auto mode = *system.index_of(*candidate.pair);
    const double ratio = t.mu / t.Omega;
    return obs.nu[mode] - 4.0 * ratio * ratio * obs.var_pop[static_cast<std::size_t>(candidate.pair->j - 1)];
}

double joint_moment_matter_photon(const AtomicSystem& system, const VariationalCandidate& candidate,
                                  int level, int atom_count) {
    const auto recipe = variational_state_params(candidate, atom_count);
    const auto obs = expectations(system, candidate);
    const double matter = atom_count * obs.pop.at(static_cast<std::size_t>(level - 1));
    return matter * recipe.mean_photons();
}

void write_observables_header(const AtomicSystem& system, std::ostream& out,
                              const std::vector<std::string>& prefix) {
    for (const auto& p : prefix) out << p << ',';
    out << "region,pair,nu";
    for (int l = 1; l <= system.levels(); ++l) out << ",pop_" << l;
    out << ",coh,var_pop\n";
}

void write_observables_row(const AtomicSystem& system, const VariationalCandidate& candidate,
                           const ObservableSet& obs, std::ostream& out, const std::vector<double>& prefix) {
    for (double p : prefix) out << format_number(p) << ',';
    double nu = 0.0, coh = 0.0, var_pop = 0.0;
    if (candidate.pair) {
        const auto mode = *system.index_of(*candidate.pair);
        nu = obs.nu[mode];
        coh = obs.coh[mode];
        var_pop = obs.var_pop[static_cast<std::size_t>(candidate.pair->j - 1)];
        out << "S_" << candidate.pair->label() << ',' << candidate.pair->label();
    } else {
        out << "N,none";
    }
    out << ',' << format_number(nu);
    for (double p : obs.pop) out << ',' << format_number(p);
    out << ',' << format_number(coh) << ',' << format_number(var_pop) << '\n';
}

}  // namespace polydicke
