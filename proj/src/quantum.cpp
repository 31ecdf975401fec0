#include "polydicke/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "polydicke/errors.hpp"
#include "polydicke/rwa.hpp"

namespace polydicke {

namespace {

void enumerate_compositions(int levels, int remaining, std::vector<int>& current,
                            std::vector<std::vector<int>>& out) {
    const auto pos = current.size();
    if (static_cast<int>(pos) == levels - 1) {
        current.push_back(remaining);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (int v = 0; v <= remaining; ++v) {
        current.push_back(v);
        enumerate_compositions(levels, remaining - v, current, out);
        current.pop_back();
    }
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

// ---------------------------------------------------------------------------
// Basis

TruncatedBasis::TruncatedBasis(int levels, int atom_count, std::vector<int> cutoffs)
    : levels_(levels), atom_count_(atom_count), cutoffs_(std::move(cutoffs)) {
    if (levels < 1 || atom_count < 1) throw ConfigError("basis needs at least one level and one atom");
    for (int c : cutoffs_) {
        if (c < 0) throw ConfigError("photon cutoffs must be non-negative");
        photon_states_ *= static_cast<std::size_t>(c) + 1;
    }
    std::vector<int> current;
    enumerate_compositions(levels, atom_count, current, atom_states_);
    for (std::size_t r = 0; r < atom_states_.size(); ++r) atom_rank_.emplace(atom_states_[r], r);
}

double TruncatedBasis::predicted_size(int levels, int atom_count, const std::vector<int>& cutoffs) {
    double size = 1.0;
    for (int c : cutoffs) size *= c + 1.0;
    // C(N + n - 1, n - 1)
    double comb = 1.0;
    for (int i = 1; i <= levels - 1; ++i) comb = comb * (atom_count + i) / i;
    return size * std::round(comb);
}

int TruncatedBasis::photons(std::size_t index, std::size_t mode) const {
    std::size_t p = index / atom_states_.size();
    for (std::size_t m = cutoffs_.size(); m-- > mode + 1;) p /= static_cast<std::size_t>(cutoffs_[m]) + 1;
    return static_cast<int>(p % (static_cast<std::size_t>(cutoffs_[mode]) + 1));
}

FockKet TruncatedBasis::ket(std::size_t index) const {
    if (index >= size()) throw std::out_of_range("basis index out of range");
    FockKet k;
    k.photons.resize(cutoffs_.size());
    std::size_t p = index / atom_states_.size();
    for (std::size_t m = cutoffs_.size(); m-- > 0;) {
        const auto radix = static_cast<std::size_t>(cutoffs_[m]) + 1;
        k.photons[m] = static_cast<int>(p % radix);
        p /= radix;
    }
    k.atoms = atom_states_[index % atom_states_.size()];
    return k;
}

std::optional<std::size_t> TruncatedBasis::index_of(const FockKet& ket) const {
    if (ket.photons.size() != cutoffs_.size()) return std::nullopt;
    std::size_t p = 0;
    for (std::size_t m = 0; m < cutoffs_.size(); ++m) {
        if (ket.photons[m] < 0 || ket.photons[m] > cutoffs_[m]) return std::nullopt;
        p = p * (static_cast<std::size_t>(cutoffs_[m]) + 1) + static_cast<std::size_t>(ket.photons[m]);
    }
    auto it = atom_rank_.find(ket.atoms);
    if (it == atom_rank_.end()) return std::nullopt;
    return p * atom_states_.size() + it->second;
}

TruncatedBasis build_basis(const AtomicSystem& system, int atom_count, const std::vector<int>& cutoffs,
                           std::size_t max_states) {
    require_valid(system);
    if (cutoffs.size() != system.mode_count()) {
        throw ConfigError("expected " + std::to_string(system.mode_count()) + " photon cutoffs, got " +
                          std::to_string(cutoffs.size()));
    }
    if (atom_count < 1) throw ConfigError("atom count must be positive");
    for (int c : cutoffs) {
        if (c < 0) throw ConfigError("photon cutoffs must be non-negative");
    }
    const double size = TruncatedBasis::predicted_size(system.levels(), atom_count, cutoffs);
    if (size > static_cast<double>(max_states)) {
        throw BudgetError("basis of " + std::to_string(static_cast<long long>(size)) + " states exceeds the budget of " +
                          std::to_string(max_states));
    }
    return TruncatedBasis(system.levels(), atom_count, cutoffs);
}

// ---------------------------------------------------------------------------
// Hamiltonian

std::vector<Eigen::Triplet<double>> SparseHamiltonian::triplets() const {
    std::vector<Eigen::Triplet<double>> out;
    out.reserve(static_cast<std::size_t>(matrix.nonZeros()));
    for (Eigen::Index r = 0; r < matrix.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(matrix, r); it; ++it) out.emplace_back(it.row(), it.col(), it.value());
    }
    return out;
}

SparseHamiltonian build_hamiltonian(const AtomicSystem& system, const TruncatedBasis& basis, bool rwa) {
    if (basis.levels() != system.levels() || basis.cutoffs().size() != system.mode_count()) {
        throw ConfigError("basis does not match the system");
    }
    const std::size_t dim = basis.size();
    const double scale = 1.0 / std::sqrt(static_cast<double>(basis.atom_count()));
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(dim * (1 + 4 * system.mode_count()));

    for (std::size_t i = 0; i < dim; ++i) {
        const FockKet ket = basis.ket(i);
        double diag = 0.0;
        for (std::size_t m = 0; m < system.mode_count(); ++m) diag += system.transitions()[m].Omega * ket.photons[m];
        for (int l = 1; l <= system.levels(); ++l) diag += system.omega(l) * ket.atoms[static_cast<std::size_t>(l - 1)];
        if (diag != 0.0) entries.emplace_back(i, i, diag);

        for (std::size_t m = 0; m < system.mode_count(); ++m) {
            const auto& t = system.transitions()[m];
            const auto j = static_cast<std::size_t>(t.pair.j - 1);
            const auto k = static_cast<std::size_t>(t.pair.k - 1);
            if (t.mu == 0.0 || ket.atoms[k] == 0) continue;
            // A_jk moves one atom from level k down to level j.
            FockKet target = ket;
            target.atoms[k] -= 1;
            target.atoms[j] += 1;
            const double atom_amp = std::sqrt((ket.atoms[j] + 1.0) * ket.atoms[k]);
            const int nu = ket.photons[m];

            if (nu < basis.cutoffs()[m]) {
                target.photons[m] = nu + 1;
                const auto to = *basis.index_of(target);
                const double v = -t.mu * scale * atom_amp * std::sqrt(nu + 1.0);
                entries.emplace_back(i, to, v);
                entries.emplace_back(to, i, v);
            }
            if (!rwa && nu > 0) {
                target.photons[m] = nu - 1;
                const auto to = *basis.index_of(target);
                const double v = -t.mu * scale * atom_amp * std::sqrt(static_cast<double>(nu));
                entries.emplace_back(i, to, v);
                entries.emplace_back(to, i, v);
            }
        }
    }
    SparseHamiltonian h;
    h.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    h.matrix.setFromTriplets(entries.begin(), entries.end());
    h.matrix.makeCompressed();
    return h;
}

std::vector<SymmetrySector> split_sectors(const AtomicSystem& system, const TruncatedBasis& basis) {
    const auto charges = make_charges(system);
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        groups[parity_label(charge_of_state(charges, basis.ket(i)))].push_back(i);
    }
    std::vector<SymmetrySector> out;
    for (auto& [label, idx] : groups) out.push_back({label, std::move(idx)});
    return out;
}

SparseMatrix restrict_to(const SparseMatrix& matrix, const std::vector<std::size_t>& indices) {
    std::vector<Eigen::Index> local(static_cast<std::size_t>(matrix.rows()), -1);
    for (std::size_t a = 0; a < indices.size(); ++a) local[indices[a]] = static_cast<Eigen::Index>(a);
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t a = 0; a < indices.size(); ++a) {
        for (SparseMatrix::InnerIterator it(matrix, static_cast<Eigen::Index>(indices[a])); it; ++it) {
            const auto b = local[static_cast<std::size_t>(it.col())];
            if (b >= 0) entries.emplace_back(static_cast<Eigen::Index>(a), b, it.value());
        }
    }
    SparseMatrix sub(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(indices.size()));
    sub.setFromTriplets(entries.begin(), entries.end());
    sub.makeCompressed();
    return sub;
}

// ---------------------------------------------------------------------------
// Eigensolvers

namespace {

void fix_sign(Eigen::VectorXd& v) {
    Eigen::Index at = 0;
    v.cwiseAbs().maxCoeff(&at);
    if (v[at] < 0.0) v = -v;
}

}  // namespace

EigenPair lowest_eigenpair_dense(const SparseMatrix& matrix) {
    if (matrix.rows() == 0) throw std::invalid_argument("empty matrix");
    const Eigen::MatrixXd dense(matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0.0);
    EigenPair out{solver.eigenvalues()(0), solver.eigenvectors().col(0), 0.0};
    fix_sign(out.vector);
    out.residual = (matrix * out.vector - out.value * out.vector).norm();
    return out;
}

EigenPair lowest_eigenpair_lanczos(const SparseMatrix& matrix, const SolverConfig& config) {
    const Eigen::Index n = matrix.rows();
    if (n == 0) throw std::invalid_argument("empty matrix");
    const Eigen::Index m = std::min<Eigen::Index>(std::max(config.krylov_dim, 4), n);
    std::mt19937_64 rng(config.seed);
    auto random_vector = [&] {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform01(rng) - 0.5;
        return v;
    };

    Eigen::MatrixXd V(n, m), W(n, m);
    Eigen::Index k = 0;
    Eigen::VectorXd v = random_vector();
    double residual = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart <= config.max_restarts; ++restart) {
        int fresh = 0;
        while (k < m) {
            for (int pass = 0; pass < 2; ++pass) v -= V.leftCols(k) * (V.leftCols(k).transpose() * v);
            const double norm = v.norm();
            if (norm < 1e-12) {
                if (++fresh > 8) break;
                v = random_vector();
                continue;
            }
            V.col(k) = v / norm;
            W.col(k) = matrix * V.col(k);
            v = W.col(k);
            ++k;
        }

        Eigen::MatrixXd T = V.leftCols(k).transpose() * W.leftCols(k);
        T = 0.5 * (T + T.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(T);
        const double theta = ritz.eigenvalues()(0);
        const Eigen::VectorXd y = ritz.eigenvectors().col(0);
        Eigen::VectorXd x = V.leftCols(k) * y;
        const Eigen::VectorXd r = W.leftCols(k) * y - theta * x;
        residual = r.norm();
        if (residual <= config.tolerance * std::max(1.0, std::abs(theta)) || k == n) {
            x.normalize();
            fix_sign(x);
            return {theta, x, (matrix * x - theta * x).norm()};
        }

        const Eigen::Index keep = std::max<Eigen::Index>(1, k / 2);
        const Eigen::MatrixXd Y = ritz.eigenvectors().leftCols(keep);
        const Eigen::MatrixXd Vk = V.leftCols(k) * Y;
        const Eigen::MatrixXd Wk = W.leftCols(k) * Y;
        V.leftCols(keep) = Vk;
        W.leftCols(keep) = Wk;
        k = keep;
        v = r;
    }
    throw ConvergenceError("Lanczos did not converge, residual " + std::to_string(residual), residual);
}

EigenPair lowest_eigenpair(const SparseMatrix& matrix, const SolverConfig& config) {
    if (static_cast<std::size_t>(matrix.rows()) <= config.dense_threshold) return lowest_eigenpair_dense(matrix);
    return lowest_eigenpair_lanczos(matrix, config);
}

// ---------------------------------------------------------------------------
// Ground state

QuantumGroundResult ground_state(const AtomicSystem& system, int atom_count, const std::vector<int>& cutoffs,
                                 bool rwa, const SolverConfig& config) {
    const auto basis = build_basis(system, atom_count, cutoffs, config.max_states);
    const auto h = build_hamiltonian(system, basis, rwa);
    const auto sectors = split_sectors(system, basis);

    std::vector<EigenPair> pairs;
    pairs.reserve(sectors.size());
    for (const auto& s : sectors) pairs.push_back(lowest_eigenpair(restrict_to(h.matrix, s.indices), config));

    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& p : pairs) lowest = std::min(lowest, p.value);
    const double window = 1e-10 * std::max(1.0, std::abs(lowest));

    QuantumGroundResult res;
    res.cutoffs = cutoffs;
    res.atom_count = atom_count;
    res.rwa = rwa;
    std::optional<std::size_t> winner;
    for (std::size_t s = 0; s < sectors.size(); ++s) {
        res.sector_energies[sectors[s].label] = pairs[s].value / atom_count;
        if (pairs[s].value <= lowest + window) {
            res.degenerate_sectors.push_back(sectors[s].label);
            if (!winner) winner = s;
        }
    }
    const auto& best = pairs[*winner];
    res.sector = sectors[*winner].label;
    res.energy = best.value / atom_count;
    res.residual = best.residual;
    res.vector = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t a = 0; a < sectors[*winner].indices.size(); ++a) {
        res.vector[static_cast<Eigen::Index>(sectors[*winner].indices[a])] = best.vector[static_cast<Eigen::Index>(a)];
    }

    const std::size_t modes = system.mode_count();
    res.nu.assign(modes, 0.0);
    res.pop.assign(static_cast<std::size_t>(system.levels()), 0.0);
    res.mode_boundary_weight.assign(modes, 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const double w = res.vector[static_cast<Eigen::Index>(i)] * res.vector[static_cast<Eigen::Index>(i)];
        if (w == 0.0) continue;
        const FockKet ket = basis.ket(i);
        bool saturated = false;
        for (std::size_t m = 0; m < modes; ++m) {
            res.nu[m] += w * ket.photons[m];
            if (system.transitions()[m].mu > 0.0 && ket.photons[m] == cutoffs[m]) {
                res.mode_boundary_weight[m] += w;
                saturated = true;
            }
        }
        for (std::size_t l = 0; l < res.pop.size(); ++l) res.pop[l] += w * ket.atoms[l];
        if (saturated) res.boundary_weight += w;
    }
    for (auto& v : res.nu) v /= atom_count;
    for (auto& v : res.pop) v /= atom_count;
    res.truncation_converged = res.boundary_weight <= config.boundary_threshold;
    return res;
}

std::optional<double> delta_nu(const AtomicSystem& system, const QuantumGroundResult& result, LevelPair a,
                               LevelPair b) {
    const auto ia = system.index_of(a);
    const auto ib = system.index_of(b);
    if (!ia || !ib) throw ConfigError("delta_nu needs two transitions of the system");
    const double na = result.nu.at(*ia);
    const double nb = result.nu.at(*ib);
    if (na + nb <= 1e-12) return std::nullopt;
    return (nb - na) / (nb + na);
}

CutoffConvergence converge_cutoff(const AtomicSystem& system, int atom_count, std::vector<int> start_cutoffs,
                                  double tolerance, bool rwa, const SolverConfig& config) {
    if (!(tolerance > 0.0)) throw ConfigError("energy tolerance must be positive");
    CutoffConvergence out;
    out.cutoffs = std::move(start_cutoffs);
    out.result = ground_state(system, atom_count, out.cutoffs, rwa, config);
    out.history.push_back({out.cutoffs, out.result.energy, out.result.boundary_weight});

    std::vector<std::size_t> coupled;
    for (std::size_t m = 0; m < system.mode_count(); ++m) {
        if (system.transitions()[m].mu > 0.0) coupled.push_back(m);
    }
    if (coupled.empty()) return out;

    while (true) {
        std::vector<std::size_t> grow;
        for (auto m : coupled) {
            if (out.result.mode_boundary_weight[m] > config.boundary_threshold) grow.push_back(m);
        }
        if (grow.empty()) grow = coupled;
        std::vector<int> next = out.cutoffs;
        for (auto m : grow) next[m] = std::max(1, 2 * next[m]);

        auto result = ground_state(system, atom_count, next, rwa, config);
        const double change = std::abs(result.energy - out.result.energy);
        out.history.push_back({next, result.energy, result.boundary_weight});
        out.cutoffs = std::move(next);
        out.result = std::move(result);
        if (change < tolerance && out.result.boundary_weight < config.boundary_threshold) return out;
    }
}

// ---------------------------------------------------------------------------

Eigen::VectorXd product_state_vector(const AtomicSystem& system, const TruncatedBasis& basis,
                                     const std::vector<double>& field_radius, const std::vector<double>& rho) {
    if (field_radius.size() != system.mode_count() || rho.size() != static_cast<std::size_t>(system.levels() - 1)) {
        throw std::invalid_argument("amplitudes do not match the system");
    }
    const int n_atoms = basis.atom_count();
    std::vector<double> amp(static_cast<std::size_t>(system.levels()), 1.0);
    std::copy(rho.begin(), rho.end(), amp.begin() + 1);

    auto log_or_zero = [](double base, int power, double& log_sum) {
        if (power == 0) return true;
        if (base == 0.0) return false;
        log_sum += power * std::log(std::abs(base));
        return true;
    };

    Eigen::VectorXd psi(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const FockKet ket = basis.ket(i);
        double log_c = std::lgamma(n_atoms + 1.0) / 2.0;
        bool nonzero = true;
        for (std::size_t m = 0; m < field_radius.size() && nonzero; ++m) {
            const double alpha = std::sqrt(static_cast<double>(n_atoms)) * field_radius[m];
            log_c += -alpha * alpha / 2.0 - std::lgamma(ket.photons[m] + 1.0) / 2.0;
            nonzero = log_or_zero(alpha, ket.photons[m], log_c);
        }
        for (std::size_t l = 0; l < amp.size() && nonzero; ++l) {
            log_c -= std::lgamma(ket.atoms[l] + 1.0) / 2.0;
            nonzero = log_or_zero(amp[l], ket.atoms[l], log_c);
        }
        psi[static_cast<Eigen::Index>(i)] = nonzero ? std::exp(log_c) : 0.0;
    }
    psi.normalize();
    return psi;
}

nlohmann::json result_to_json(const AtomicSystem& system, const QuantumGroundResult& result) {
    nlohmann::json doc;
    doc["couplings"] = nlohmann::json::object();
    nlohmann::json nu = nlohmann::json::object();
    for (std::size_t m = 0; m < system.mode_count(); ++m) {
        const auto label = system.transitions()[m].pair.label();
        doc["couplings"]["mu_" + label] = system.transitions()[m].mu;
        nu[label] = result.nu[m];
    }
    doc["energy_per_particle"] = result.energy;
    doc["sector"] = result.sector;
    doc["degenerate_sectors"] = result.degenerate_sectors;
    doc["sector_energies"] = result.sector_energies;
    doc["observables"] = {{"nu", nu}, {"pop", result.pop}};
    doc["delta_nu"] = nullptr;
    if (system.mode_count() >= 2) {
        const auto dn = delta_nu(system, result, system.transitions()[0].pair, system.transitions()[1].pair);
        if (dn) doc["delta_nu"] = *dn;
    }
    doc["cutoffs"] = result.cutoffs;
    doc["atom_count"] = result.atom_count;
    doc["rwa"] = result.rwa;
    doc["boundary_weight"] = result.boundary_weight;
    doc["truncation_converged"] = result.truncation_converged;
    doc["residual"] = result.residual;
    return doc;
}

}  // namespace polydicke
