#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "polydicke/varsurface.hpp"

using namespace polydicke;
using testing_helpers::pair_energy;
using testing_helpers::random_system;
using testing_helpers::uniform;

namespace {

// Fig. 2a three-level ladder.
AtomicSystem ladder(double mu12, double mu23) { return presets::xi3(mu12, mu23); }

FieldAmplitudes zero_field(const AtomicSystem& s) {
    return {std::vector<double>(s.mode_count(), 0.0), std::vector<double>(s.mode_count(), 0.0)};
}

MatterAmplitudes zero_matter(const AtomicSystem& s) {
    const auto n = static_cast<std::size_t>(s.levels() - 1);
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

}  // namespace

TEST_CASE("full energy surface") {
    const auto s = ladder(1.0, 0.0);
    CHECK(energy_surface_full(s, zero_field(s), zero_matter(s)) == 0.0);

    SUBCASE("single condensate reproduces the closed form") {
        const double rho = std::sqrt(3.0 / 5.0);
        auto matter = zero_matter(s);
        matter.radius[0] = rho;
        auto field = zero_field(s);
        field.radius[0] = 2.0 * rho / (1.0 + rho * rho);
        const double e = energy_surface_full(s, field, matter);
        CHECK(std::abs(e - pair_energy(0.0, 1.0, 1.0, 1.0)) < 1e-14);
        CHECK(std::abs(e + 0.5625) < 1e-14);
    }

    SUBCASE("quadrature phases remove the interaction") {
        std::mt19937_64 rng(7);
        const auto sys = ladder(1.3, 0.8);
        auto matter = zero_matter(sys);
        auto field = zero_field(sys);
        for (auto& r : matter.radius) r = uniform(rng, 0, 2);
        for (auto& r : field.radius) r = uniform(rng, 0, 2);
        for (auto& p : field.phase) p = std::numbers::pi / 2;
        double diag = 0.0, denom = 1.0;
        for (std::size_t i = 0; i < matter.radius.size(); ++i) {
            diag += sys.omega(static_cast<int>(i) + 2) * matter.radius[i] * matter.radius[i];
            denom += matter.radius[i] * matter.radius[i];
        }
        double field_part = 0.0;
        for (std::size_t m = 0; m < sys.mode_count(); ++m) {
            field_part += sys.transitions()[m].Omega * field.radius[m] * field.radius[m];
        }
        CHECK(std::abs(energy_surface_full(sys, field, matter) - (diag / denom + field_part)) < 1e-14);
    }

    SUBCASE("dimension mismatch is rejected") {
        MatterAmplitudes bad{{0.1}, {0.0}};
        CHECK_THROWS_AS(energy_surface_full(s, zero_field(s), bad), std::invalid_argument);
    }
}

TEST_CASE("phase flip symmetry of the full surface") {
    std::mt19937_64 rng(11);
    for (int draw = 0; draw < 50; ++draw) {
        const auto s = random_system(rng, 2 + draw % 3);
        auto matter = zero_matter(s);
        auto field = zero_field(s);
        for (auto& r : matter.radius) r = uniform(rng, 0, 2);
        for (auto& p : matter.phase) p = uniform(rng, 0, 2 * std::numbers::pi);
        for (auto& r : field.radius) r = uniform(rng, 0, 2);
        for (auto& p : field.phase) p = uniform(rng, 0, 2 * std::numbers::pi);
        const double before = energy_surface_full(s, field, matter);
        // Flip theta of one transition and the relative matter phase of the same pair,
        // for a pair whose upper level couples to nothing else.
        for (std::size_t m = 0; m < s.mode_count(); ++m) {
            const auto p = s.transitions()[m].pair;
            int touching = 0;
            for (const auto& t : s.transitions()) touching += (t.pair.j == p.k || t.pair.k == p.k);
            if (touching != 1) continue;
            auto f2 = field;
            auto m2 = matter;
            f2.phase[m] += std::numbers::pi;
            m2.phase[static_cast<std::size_t>(p.k - 2)] += std::numbers::pi;
            CHECK(std::abs(energy_surface_full(s, f2, m2) - before) < 1e-12);
        }
    }
}

TEST_CASE("optimal phases are all zero") {
    const auto p = optimal_phases(presets::xi4(1, 0, 2));
    CHECK(p.field == std::vector<double>{0, 0, 0});
    CHECK(p.matter == std::vector<double>{0, 0, 0});
}

TEST_CASE("stationary photon radii") {
    const AtomicSystem two({0.0, 1.0}, {{{1, 2}, 1.0, 1.0}});
    CHECK(photon_stationary_r(two, std::vector<double>{0.0})[0] == 0.0);
    const double rho = std::sqrt(3.0 / 5.0);
    const double r = photon_stationary_r(two, std::vector<double>{rho})[0];
    CHECK(std::abs(r - 0.968245836551854) < 1e-12);
    CHECK(std::abs(r * r - 0.9375) < 1e-12);
    CHECK(photon_stationary_r(two, std::vector<double>{1.0})[0] == 1.0);
}

TEST_CASE("reduced energy") {
    const auto s = ladder(1.0, 0.0);
    CHECK(reduced_energy(s, std::vector<double>{0.0, 0.0}) == 0.0);
    CHECK(std::abs(reduced_energy(s, std::vector<double>{std::sqrt(0.6), 0.0}) + 0.5625) < 1e-14);
    CHECK_THROWS(reduced_energy(s, std::vector<double>{INFINITY, 0.0}));
    CHECK_THROWS(reduced_energy(s, std::vector<double>{0.1}));

    SUBCASE("agrees with the full surface at stationary field radii") {
        std::mt19937_64 rng(5);
        for (int draw = 0; draw < 30; ++draw) {
            const auto sys = random_system(rng, 2 + draw % 3);
            auto matter = zero_matter(sys);
            for (auto& r : matter.radius) r = uniform(rng, 0, 3);
            FieldAmplitudes field{photon_stationary_r(sys, matter.radius),
                                  std::vector<double>(sys.mode_count(), 0.0)};
            CHECK(std::abs(energy_surface_full(sys, field, matter) - reduced_energy(sys, matter.radius)) < 1e-12);
        }
    }
}

TEST_CASE("gradient matches central differences") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int draw = 0; draw < 100; ++draw) {
        const int n = 2 + draw % 3;
        const auto s = random_system(rng, n);
        std::vector<double> rho(static_cast<std::size_t>(n - 1));
        for (auto& r : rho) r = uniform(rng, 0, 3);
        const auto g = gradient(s, rho);
        for (std::size_t i = 0; i < rho.size(); ++i) {
            const double h = 1e-5;
            auto up = rho, down = rho;
            up[i] += h;
            down[i] -= h;
            const double fd = (reduced_energy(s, up) - reduced_energy(s, down)) / (2 * h);
            CHECK(std::abs(g[i] - fd) <= 1e-6 * std::max(std::abs(g[i]), std::abs(fd)) + 1e-10);
            ++checked;
        }
    }
    CHECK(checked == 199);
    CHECK(gradient(ladder(1, 1), std::vector<double>{0.0, 0.0}) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("two-level critical point annihilates the gradient") {
    const AtomicSystem two({0.0, 1.0}, {{{1, 2}, 1.0, 1.0}});
    CHECK(std::abs(gradient(two, std::vector<double>{std::sqrt(0.6)})[0]) < 1e-12);
}

TEST_CASE("candidates of the ladder at unit couplings") {
    const auto c = candidates(ladder(1.0, 1.0));
    REQUIRE(c.size() == 3);
    CHECK(c[0].kind == CandidateKind::Normal);
    CHECK(c[0].energy == 0.0);
    CHECK(c[0].exists);

    CHECK(c[1].kind == CandidateKind::Low);
    CHECK(c[1].exists);
    CHECK(std::abs(c[1].energy + 0.5625) < 1e-14);
    CHECK(std::abs(c[1].matter_amp - std::sqrt(3.0 / 5.0)) < 1e-14);

    CHECK(c[2].kind == CandidateKind::High);
    CHECK(c[2].exists);
    CHECK(std::abs(c[2].energy - (1.0 - 3.85 * 3.85 / 8.0)) < 1e-13);
    CHECK(std::abs(c[2].energy + 0.852813) < 1e-6);
    CHECK(std::abs(c[2].matter_amp - std::sqrt(3.85 / 4.15)) < 1e-14);
    CHECK(std::abs(c[2].matter_amp - 0.963177) < 1e-6);
}

TEST_CASE("candidates at and below the bifurcation") {
    const auto at = candidates(ladder(0.5, 0.0));
    CHECK(at[1].exists);
    CHECK(at[1].matter_amp == 0.0);
    CHECK(at[1].energy == 0.0);
    CHECK_FALSE(at[2].exists);

    const auto below = candidates(ladder(0.3, 0.0));
    CHECK_FALSE(below[1].exists);
    CHECK(minimize(ladder(0.3, 0.0)).kind == CandidateKind::Normal);
}

TEST_CASE("existing candidates sit below their boundary value") {
    std::mt19937_64 rng(99);
    for (int draw = 0; draw < 200; ++draw) {
        const auto s = random_system(rng, 2 + draw % 3);
        const auto all = candidates(s);
        CHECK(all.size() == s.mode_count() + 1);
        for (std::size_t i = 1; i < all.size(); ++i) {
            const auto& c = all[i];
            const auto& t = s.transition(*c.pair);
            const double gap = s.omega(c.pair->k) - s.omega(c.pair->j);
            CHECK(c.exists == (t.mu > 0 && 4 * t.mu * t.mu >= gap * t.Omega));
            if (c.exists) CHECK(c.energy <= s.omega(c.pair->j) + 1e-15);
        }
    }
}

TEST_CASE("minimize picks the lowest existing candidate") {
    const auto a = minimize(ladder(1.0, 1.0));
    CHECK(a.kind == CandidateKind::High);
    CHECK(*a.pair == LevelPair{2, 3});
    CHECK(std::abs(a.energy + 0.852813) < 1e-6);

    const auto b = minimize(ladder(0.2, 0.2));
    CHECK(b.kind == CandidateKind::Normal);
    CHECK(b.energy == 0.0);

    const auto c = minimize(ladder(1.0, 0.0));
    CHECK(c.kind == CandidateKind::Low);
    CHECK(std::abs(c.energy + 0.5625) < 1e-14);
}

TEST_CASE("ties resolve to the earlier candidate") {
    // At the bifurcation the low branch exists with exactly the normal energy.
    const auto s = ladder(0.5, 0.0);
    const auto all = candidates(s);
    REQUIRE(all[1].exists);
    REQUIRE(all[1].energy == all[0].energy);
    CHECK(minimize(s).kind == CandidateKind::Normal);
}

TEST_CASE("critical points annihilate the gradient of their surface") {
    std::mt19937_64 rng(31337);
    int checked = 0;
    for (int draw = 0; draw < 300; ++draw) {
        const auto s = random_system(rng, 2 + draw % 3);
        for (const auto& c : candidates(s)) {
            if (c.kind == CandidateKind::Normal || !c.exists) continue;
            const auto surface = c.kind == CandidateKind::Low ? ReducedSurface(s) : ReducedSurface::limit(s, c.pair->j);
            std::vector<double> x(surface.dim(), 0.0);
            const auto& free = surface.free_levels();
            for (std::size_t i = 0; i < free.size(); ++i) {
                if (free[i] == c.pair->k) x[i] = c.matter_amp;
            }
            for (double g : surface.gradient(x)) CHECK(std::abs(g) < 1e-10);
            CHECK(std::abs(surface.energy(x) - c.energy) < 1e-12);
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("high branch is the large-amplitude limit of the reduced surface") {
    const auto s = ladder(0.0, 1.0);
    const auto c = candidates(s)[2];
    const double big = 1e6;
    const double e = reduced_energy(s, std::vector<double>{big, c.matter_amp * big});
    CHECK(std::abs(e - c.energy) < 1e-10);
    const auto r = photon_stationary_r(s, std::vector<double>{big, c.matter_amp * big});
    CHECK(std::abs(r[1] - c.photon_amp) < 1e-10);
}

TEST_CASE("low branch closes continuously at the bifurcation") {
    double last_amp = 1.0, last_e = -1.0;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
        const auto c = candidates(ladder(0.5 + eps, 0.0))[1];
        REQUIRE(c.exists);
        CHECK(c.matter_amp < last_amp);
        CHECK(c.energy > last_e);
        last_amp = c.matter_amp;
        last_e = c.energy;
    }
    CHECK(last_amp < 2e-3);
    CHECK(std::abs(last_e) < 1e-10);
}

TEST_CASE("energies scale linearly, amplitudes are scale free") {
    std::mt19937_64 rng(17);
    for (int draw = 0; draw < 50; ++draw) {
        const auto s = random_system(rng, 2 + draw % 3);
        const double k = uniform(rng, 0.1, 5.0);
        std::vector<double> omega(s.omegas().begin(), s.omegas().end());
        for (auto& w : omega) w *= k;
        std::vector<Transition> ts = s.transitions();
        for (auto& t : ts) {
            t.Omega *= k;
            t.mu *= k;
        }
        const auto a = candidates(s);
        const auto b = candidates(AtomicSystem(omega, ts));
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::abs(b[i].energy - k * a[i].energy) <= 1e-12 * (1 + std::abs(b[i].energy)));
            CHECK(std::abs(b[i].matter_amp - a[i].matter_amp) <= 1e-12);
            CHECK(b[i].exists == a[i].exists);
        }
    }
}

TEST_CASE("numeric minimization agrees with the closed forms") {
    SUBCASE("low branch") {
        const auto r = minimize_numeric(ladder(1.0, 0.0));
        CHECK(r.converged);
        CHECK(std::abs(r.energy + 0.5625) < 1e-8);
    }
    SUBCASE("uncoupled") {
        const auto r = minimize_numeric(ladder(0.0, 0.0));
        CHECK(std::abs(r.energy) < 1e-12);
    }
    SUBCASE("high branch runs to the cap with fixed ratio") {
        NumericOptions opt;
        const auto r = minimize_numeric(ladder(1.0, 1.0), opt);
        CHECK(std::abs(r.energy + 0.852813) < 1e-6);
        CHECK(r.rho[0] > 0.5 * opt.rho_cap);
        CHECK(std::abs(r.rho[1] / r.rho[0] - 0.963177) < 1e-3);
    }
    SUBCASE("bad options") {
        NumericOptions opt;
        opt.starts = 0;
        CHECK_THROWS(minimize_numeric(ladder(1, 1), opt));
    }
}

TEST_CASE("numeric oracle on the four-level ladder grid") {
    // Guards the assumption that single-pair condensates are the global minimum.
    int worst_i = -1;
    double worst = 0.0;
    int idx = 0;
    for (int a = 0; a < 10; ++a) {
        for (int b = 0; b < 10; ++b) {
            for (int c = 0; c < 10; ++c, ++idx) {
                const auto s = presets::xi4(2.0 * a / 9, 2.0 * b / 9, 2.0 * c / 9);
                NumericOptions opt;
                opt.starts = 12;
                const double diff = minimize(s).energy - minimize_numeric(s, opt).energy;
                if (std::abs(diff) > std::abs(worst)) {
                    worst = diff;
                    worst_i = idx;
                }
            }
        }
    }
    INFO("worst cell " << worst_i << " difference " << worst);
    CHECK(std::abs(worst) <= 1e-6);
}

TEST_CASE("variational state recipes") {
    const auto normal = variational_state_params(minimize(ladder(0, 0)), 4);
    CHECK(normal.levels == std::vector<int>{1});
    CHECK_FALSE(normal.mode.has_value());
    CHECK(normal.field_amplitude == 0.0);

    const auto low = variational_state_params(minimize(ladder(1, 0)), 4);
    CHECK(low.levels == std::vector<int>{1, 2});
    CHECK(std::abs(low.mixing - 0.774597) < 1e-6);
    CHECK(std::abs(low.field_amplitude - 2.0 * 0.968245836551854) < 1e-12);
    CHECK(*low.mode == LevelPair{1, 2});

    const auto high = variational_state_params(minimize(ladder(0, 1)), 1);
    const double eta = std::sqrt(3.85 / 4.15);
    CHECK(high.levels == std::vector<int>{2, 3});
    CHECK(std::abs(high.mixing - eta) < 1e-14);
    CHECK(std::abs(high.field_amplitude - 2.0 * eta / (0.5 * (1 + eta * eta))) < 1e-14);
    // Quoted to six figures after rounding eta first.
    CHECK(std::abs(high.field_amplitude - 1.998585) < 1e-5);

    auto missing = candidates(ladder(0.1, 0))[1];
    CHECK_THROWS(variational_state_params(missing, 1));
}
