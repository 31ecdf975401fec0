#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "helpers.hpp"
#include "polydicke/errors.hpp"
#include "polydicke/phasemap.hpp"
#include "polydicke/rwa.hpp"

using namespace polydicke;
using testing_helpers::uniform;

namespace {

// Coherent-state energy with only the co-rotating coupling terms kept.
double rwa_surface(const AtomicSystem& s, const std::vector<double>& r, const std::vector<double>& theta,
                   const std::vector<double>& rho, const std::vector<double>& phi) {
    auto amp = [&](int level) { return level == 1 ? 1.0 : rho[level - 2]; };
    auto ph = [&](int level) { return level == 1 ? 0.0 : phi[level - 2]; };
    double d = 1.0;
    for (double x : rho) d += x * x;
    double e = 0.0;
    for (int l = 2; l <= s.levels(); ++l) e += s.omega(l) * amp(l) * amp(l) / d;
    for (std::size_t m = 0; m < s.mode_count(); ++m) {
        const auto& t = s.transitions()[m];
        e += t.Omega * r[m] * r[m];
        e -= 2.0 * t.mu * r[m] * amp(t.pair.j) * amp(t.pair.k) * std::cos(theta[m] - (ph(t.pair.k) - ph(t.pair.j))) / d;
    }
    return e;
}

FockKet random_ket(std::mt19937_64& rng, const AtomicSystem& s, int atoms) {
    FockKet ket{std::vector<int>(s.mode_count()), std::vector<int>(s.levels(), 0)};
    for (auto& n : ket.photons) n = static_cast<int>(rng() % 6);
    for (int a = 0; a < atoms; ++a) ++ket.atoms[rng() % ket.atoms.size()];
    return ket;
}

}  // namespace

TEST_CASE("rotating-wave rescaling") {
    const auto s = presets::xi3(1.0, 0.6);
    const auto half = rwa_rescale(s);
    CHECK(half.transition({1, 2}).mu == 0.5);
    CHECK(half.transition({2, 3}).mu == 0.3);
    CHECK(half.transition({2, 3}).Omega == 0.5);
    CHECK(std::equal(half.omegas().begin(), half.omegas().end(), s.omegas().begin()));
    CHECK(rwa_rescale(presets::xi3()).transition({1, 2}).mu == 0.0);
    CHECK(rwa_rescale(half).transition({1, 2}).mu == 0.25);

    // Boundary of the rescaled problem in original units.
    const auto base = presets::xi3(0.0, 0.0);
    double lo = 0.0, hi = 2.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (minimize(rwa_rescale(base.with_mu({1, 2}, mid))).kind == CandidateKind::Normal ? lo : hi) = mid;
    }
    CHECK(std::abs(lo - 1.0) < 1e-12);
}

TEST_CASE("rescaled full surface equals the co-rotating surface") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 300; ++t) {
        const auto s = testing_helpers::random_system(rng, 2 + t % 3);
        const auto m = s.mode_count();
        const auto n = static_cast<std::size_t>(s.levels() - 1);
        std::vector<double> r(m), zero_m(m, 0.0), rho(n), zero_n(n, 0.0);
        for (auto& x : r) x = uniform(rng, 0, 2);
        for (auto& x : rho) x = uniform(rng, 0, 3);
        const double full = energy_surface_full(rwa_rescale(s), {r, zero_m}, {rho, zero_n});
        CHECK(std::abs(full - rwa_surface(s, r, zero_m, rho, zero_n)) < 1e-13);

        // The co-rotating surface never goes below the aligned-phase value.
        std::vector<double> theta(m), phi(n);
        for (auto& x : theta) x = uniform(rng, -3.2, 3.2);
        for (auto& x : phi) x = uniform(rng, -3.2, 3.2);
        CHECK(rwa_surface(s, r, theta, rho, phi) >= full - 1e-13);
    }
}

TEST_CASE("excitation weights of the three-level configurations") {
    CHECK(excitation_weights(presets::xi3()).lambda == std::vector<int>{0, 1, 2});
    CHECK(excitation_weights(presets::v3()).lambda == std::vector<int>{0, 1, 1});
    CHECK(excitation_weights(presets::lambda3()).lambda == std::vector<int>{0, 0, 1});
    CHECK(excitation_weights(presets::xi4()).lambda == std::vector<int>{0, 1, 2, 3});
    CHECK(excitation_weights(presets::v3()).of(3) == 1);
}

TEST_CASE("inconsistent excitation weights are reported") {
    const AtomicSystem loop({0.0, 1.0, 1.3}, {{{1, 2}, 1.0, 0.1}, {{2, 3}, 0.5, 0.1}, {{1, 3}, 1.0, 0.1}});
    CHECK_THROWS_WITH_AS(excitation_weights(loop), doctest::Contains("inconsistent weights"), ConfigError);
    const AtomicSystem negative({0.0, 0.2, 0.5, 1.0}, {{{1, 4}, 1.0, 0.1}, {{3, 4}, 1.0, 0.1}, {{2, 3}, 1.0, 0.1}});
    CHECK_THROWS_WITH_AS(excitation_weights(negative), doctest::Contains("inconsistent weights"), ConfigError);
    // A closed loop with matching path sums is fine.
    const AtomicSystem diamond({0.0, 0.4, 0.6, 1.0},
                               {{{1, 2}, 1.0, 0.1}, {{1, 3}, 1.0, 0.1}, {{2, 4}, 1.0, 0.1}, {{3, 4}, 1.0, 0.1}});
    CHECK(excitation_weights(diamond).lambda == std::vector<int>{0, 1, 1, 2});
}

TEST_CASE("charges of basis kets") {
    const auto s = presets::xi3();
    const auto charges = make_charges(s);
    CHECK(charge_of_state(charges, {{0, 0}, {3, 0, 0}}) == std::vector<int>{3, 0, 0});
    CHECK(charge_of_state(charges, {{1, 0}, {0, 1, 0}}) == std::vector<int>{-1, 2, 0});
    CHECK(charge_of_state(charges, {{0, 1}, {0, 0, 1}}) == std::vector<int>{0, -1, 2});
    CHECK_THROWS(charge_of_state(charges, {{0}, {1, 0, 0}}));
    CHECK(parity_label({-1, 2, 0}) == "ee");
    CHECK(parity_label({0, -1, 2}) == "oe");
}

TEST_CASE("charge sums and the excitation identity") {
    std::mt19937_64 rng(5);
    for (const auto& s : {presets::xi3(), presets::v3(), presets::lambda3(), presets::xi4()}) {
        const auto charges = make_charges(s);
        const auto weights = excitation_weights(s);
        for (int t = 0; t < 500; ++t) {
            const int atoms = 1 + static_cast<int>(rng() % 7);
            const auto ket = random_ket(rng, s, atoms);
            const auto k = charge_of_state(charges, ket);
            CHECK(std::accumulate(k.begin(), k.end(), 0) == atoms);
            int m = std::accumulate(ket.photons.begin(), ket.photons.end(), 0);
            for (int l = 1; l <= s.levels(); ++l) m += weights.of(l) * ket.atoms[l - 1];
            CHECK(total_excitations(weights, k) == m);
        }
    }
}

TEST_CASE("co-rotating phase diagram is the full one stretched by two") {
    const auto s = presets::xi3();
    const std::vector<GridAxis> axes{{{1, 2}, 0.0, 2.0, 41}, {{2, 3}, 0.0, 2.0, 41}};
    std::vector<GridAxis> half = axes;
    for (auto& a : half) a.hi /= 2;
    const auto full = scan_grid(s, half);
    const auto grid = scan_grid(s, axes);
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        const auto rwa = minimize(rwa_rescale(system_at(s, axes, grid.cells[i].coords)));
        CHECK(RegionLabel::of(rwa) == full.cells[i].label);
        CHECK(std::abs(rwa.energy - full.cells[i].energy) < 1e-14);
    }
}
