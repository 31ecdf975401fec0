import math

import pytest

import polydicke as pd


def test_xi_candidates_and_minimum():
    system = pd.xi3(1.0, 1.0)
    cands = pd.candidates(system)
    assert [c["region"] for c in cands] == ["N", "S_1_2", "S_2_3"]
    assert cands[1]["energy"] == pytest.approx(-0.5625, abs=1e-12)
    best = pd.minimize(system)
    assert best["region"] == "S_2_3"
    assert best["energy"] == pytest.approx(1 - 3.85**2 / 8, abs=1e-12)


def test_numeric_oracle_matches_closed_form():
    system = pd.xi3(1.0, 0.0)
    rho, energy, converged = pd.minimize_numeric(system, starts=8, seed=3)
    assert converged
    assert energy == pytest.approx(-0.5625, abs=1e-8)
    assert rho[0] == pytest.approx(math.sqrt(3 / 5), abs=1e-5)


def test_system_roundtrip_and_validation():
    system = pd.AtomicSystem([0.0, 1.0], [(1, 2, 1.0, 0.7)])
    again = pd.AtomicSystem.from_json(system.to_json())
    assert again.levels == 2 and again.mode_count == 1
    with pytest.raises(ValueError):
        pd.AtomicSystem([0.0, 1.0, 0.5], [(1, 2, 1.0, 0.7)])


def test_grid_and_boundaries():
    system = pd.xi3()
    assert pd.normal_boundary(system, (1, 2)) == pytest.approx(0.5)
    cells = pd.scan_grid(system, [((1, 2), 0.0, 2.0, 5), ((2, 3), 0.0, 2.0, 5)])
    assert len(cells) == 25
    assert {label for _, label, _ in cells} == {"N", "S_1_2", "S_2_3"}


def test_observables_and_weights():
    obs = pd.expectations(pd.xi3(1.0, 0.0))
    assert obs["nu"][0] == pytest.approx(0.9375)
    assert sum(obs["pop"]) == 1.0
    assert pd.excitation_weights(pd.lambda3()) == [0, 0, 1]


def test_exact_ground_state_is_below_variational():
    system = pd.xi3(1.0, 1.0)
    result = pd.ground_state(system, 1, [20, 20])
    assert result["energy"] <= pd.minimize(system)["energy"] + 1e-9
    assert result["residual"] < 1e-8
    assert pd.ground_state(pd.xi3(0.0, 0.3), 1, [4, 4])["delta_nu"] is None
