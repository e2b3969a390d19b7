"""Tests for the Nehari descent, synchronized solutions and κ₀ continuation"""
import math

import numpy as np
import pytest

from app.errors import ConfigError, NumericalError
from app.models.couplings import Couplings, PerturbationProfile
from app.models.enums import Branch
from app.solver.analysis import translate_pair
from app.solver.energy import EnergyLandscape, phi_energy
from app.solver.grid import make_grid
from app.solver.ground_state import (
    NehariDescent,
    _kappa_path,
    build_synchronized,
    continuation_kappa,
    kappa_free_state,
    random_pair,
    residual_norm,
    sech_pair,
    solve_ground_state,
    soliton_norm_sq,
    synchronized_amplitudes,
    synchronized_energy,
)


def closed_form_energy(beta0, kappa0):
    return 8.0 / 3.0 * (1.0 - kappa0) ** 1.5 / (1.0 + beta0)


def test_synchronized_amplitudes():
    a1, a2, a3 = synchronized_amplitudes(Couplings(beta0=1.0, kappa0=0.5))
    assert (a1, a2) == pytest.approx((0.5, 0.5))
    assert a3 == pytest.approx(math.sqrt(0.5))


@pytest.mark.parametrize("branch,signs", [
    (Branch.Z1, (1, 1)), (Branch.Z2, (-1, -1)), (Branch.Z3, (1, -1)), (Branch.Z4, (-1, 1)),
])
def test_branch_signs(branch, signs):
    a1, a2, _ = synchronized_amplitudes(Couplings(beta0=1.0, kappa0=0.5), branch)
    assert (math.copysign(1, a1), math.copysign(1, a2)) == signs


@pytest.mark.parametrize("beta0,kappa0", [(1.0, 0.5), (3.0, 0.3), (0.0, 0.9)])
def test_synchronized_solutions_are_discrete_solutions(line_grid, soliton_1d, beta0, kappa0):
    c = Couplings(beta0=beta0, kappa0=kappa0)
    sync = build_synchronized(Branch.Z1, c, soliton_1d, line_grid)
    assert residual_norm(sync.pair, c) < 1e-3
    assert phi_energy(sync.pair, c) == pytest.approx(closed_form_energy(beta0, kappa0), abs=1e-4)


def test_z2_mirrors_z1(line_grid, soliton_1d):
    c = Couplings(beta0=1.0, kappa0=0.5)
    z1 = build_synchronized(Branch.Z1, c, soliton_1d, line_grid)
    z2 = build_synchronized(Branch.Z2, c, soliton_1d, line_grid)
    assert np.array_equal(z2.pair.u.values, -z1.pair.u.values)
    assert phi_energy(z2.pair, c) == pytest.approx(phi_energy(z1.pair, c), rel=1e-14)


def test_antisymmetric_branch_exact_variant(line_grid, soliton_1d):
    c = Couplings(beta0=1.0, kappa0=0.5)
    stated = build_synchronized(Branch.Z3, c, soliton_1d, line_grid)
    exact = build_synchronized(Branch.Z3, c, soliton_1d, line_grid, exact_antisymmetric=True)
    assert residual_norm(exact.pair, c) < 1e-3
    assert residual_norm(stated.pair, c) > 0.1


def test_synchronized_radial_profile(soliton_3d):
    c = Couplings(beta0=1.0, kappa0=0.5)
    sync = build_synchronized(Branch.Z1, c, soliton_3d)
    assert residual_norm(sync.pair, c) < 1e-3
    expected = synchronized_energy(c, soliton_norm_sq(soliton_3d), dimension=3)
    assert phi_energy(sync.pair, c) == pytest.approx(expected, rel=1e-3)


def test_synchronized_requires_cubic_equal_couplings(soliton_1d):
    with pytest.raises(ConfigError, match="μ=a₀=b₀"):
        build_synchronized(Branch.Z1, Couplings(a0=1.0, b0=2.0), soliton_1d)


def test_soliton_norm(soliton_1d):
    assert soliton_norm_sq(soliton_1d) == pytest.approx(16.0 / 3.0, rel=1e-4)


def test_kappa_free_state(line_grid, soliton_1d):
    c = Couplings(a0=1.0, b0=2.0, beta0=3.0, kappa0=0.0)
    state = kappa_free_state(c, soliton_1d)
    assert state.u.origin_value == pytest.approx(math.sqrt(2.0 / 7.0), rel=1e-6)
    assert state.v.origin_value == pytest.approx(math.sqrt(4.0 / 7.0), rel=1e-6)
    assert residual_norm(state, c) < 1e-6


def test_kappa_free_state_preconditions(soliton_1d):
    with pytest.raises(ConfigError):
        kappa_free_state(Couplings(a0=1.0, b0=2.0, beta0=1.5, kappa0=0.0), soliton_1d)
    with pytest.raises(ConfigError):
        kappa_free_state(Couplings(beta0=3.0, kappa0=0.2), soliton_1d)


def test_sech_pair_off_centre_needs_line():
    with pytest.raises(ConfigError):
        sech_pair(make_grid(3, 5.0, 51), center=1.0)


def test_random_pair_is_seeded(coarse_line_grid):
    first = random_pair(coarse_line_grid, seed=11)
    assert first == random_pair(coarse_line_grid, seed=11)
    assert first != random_pair(coarse_line_grid, seed=12)
    assert np.all(first.u.values >= 0)


def test_descent_energy_never_increases(coarse_line_grid):
    c = Couplings(beta0=1.0, kappa0=0.5)
    descent = NehariDescent(EnergyLandscape(coarse_line_grid, c))
    start = sech_pair(coarse_line_grid, amplitude=0.3)
    descent.start(start.u.values, start.v.values)
    for _ in range(30):
        descent.step()
    energies = np.array(descent.trace.energies)
    assert np.all(np.diff(energies) <= 1e-12)
    assert len(descent.trace.steps) == 31


def test_symmetric_start_keeps_components_identical(coarse_line_grid, limit_couplings):
    descent = NehariDescent(EnergyLandscape(coarse_line_grid, limit_couplings))
    start = sech_pair(coarse_line_grid, amplitude=0.3)
    descent.start(start.u.values, start.v.values)
    assert np.max(np.abs(descent.u - descent.v)) == 0.0
    for _ in range(200):
        descent.step()
        assert np.max(np.abs(descent.u - descent.v)) == 0.0


@pytest.mark.parametrize("shift", [-3.0, 1.2345, 6.0])
def test_limit_energy_is_translation_invariant(limit_ground_state, limit_couplings, shift):
    moved = translate_pair(limit_ground_state.pair, shift)
    assert phi_energy(moved, limit_couplings) == pytest.approx(limit_ground_state.energy, abs=1e-6)


def test_ground_state_is_positive(coarse_line_grid, limit_ground_state):
    interior = coarse_line_grid.interior
    assert np.all(limit_ground_state.pair.u.values[interior] > 0)
    assert np.all(limit_ground_state.pair.v.values[interior] > 0)


@pytest.mark.slow
@pytest.mark.parametrize("beta0,kappa0", [(1.0, 0.5), (3.0, 0.3), (0.0, 0.9)])
def test_ground_state_converges_to_synchronized_energy(coarse_line_grid, beta0, kappa0):
    c = Couplings(beta0=beta0, kappa0=kappa0)
    report = solve_ground_state(sech_pair(coarse_line_grid), c)
    assert report.converged
    assert report.gradient_norm < 1e-8
    assert report.energy == pytest.approx(closed_form_energy(beta0, kappa0), abs=1e-3)
    assert report.peak_u == pytest.approx(report.peak_v, rel=1e-12)


def test_limit_ground_state_fixture(limit_ground_state):
    assert limit_ground_state.converged
    assert limit_ground_state.nehari_residual < 1e-9 * limit_ground_state.norm_sq
    assert limit_ground_state.energy == pytest.approx(closed_form_energy(1.0, 0.5), abs=1e-3)


def test_perturbed_ground_state_lies_below_limit_level(coarse_line_grid, limit_ground_state, limit_couplings):
    bump = np.exp(-coarse_line_grid.r ** 2)
    pert = PerturbationProfile.from_fields(coarse_line_grid, a=0.3 * bump, kappa=0.05 * bump)
    report = solve_ground_state(limit_ground_state.pair, limit_couplings, pert)
    assert report.energy < limit_ground_state.energy


def test_max_iter_exceeded(coarse_line_grid):
    with pytest.raises(NumericalError, match="max_iter exceeded"):
        solve_ground_state(sech_pair(coarse_line_grid), Couplings(beta0=1.0), max_iter=2)


def test_invalid_tolerance(coarse_line_grid):
    with pytest.raises(ConfigError):
        solve_ground_state(sech_pair(coarse_line_grid), Couplings(), tol=-1.0)


def test_kappa_path_hits_target_exactly():
    path = _kappa_path(0.1, 0.9, 0.1)
    assert path[-1] == 0.9
    assert all(b - a <= 0.1 + 1e-12 for a, b in zip([0.1] + path, path))
    assert _kappa_path(None, 0.3, 0.1) == [0.3]


@pytest.mark.parametrize("kappas,message", [
    ([], "empty"),
    ([0.3, 0.2], "increasing"),
    ([0.0, 0.5], r"\(0, 1\)"),
])
def test_continuation_rejects_bad_lists(coarse_line_grid, kappas, message):
    with pytest.raises(ConfigError, match=message):
        continuation_kappa(Couplings(beta0=1.0), None, kappas, coarse_line_grid)


@pytest.mark.slow
def test_continuation_energies_decrease_with_kappa(coarse_line_grid):
    kappas = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    records = continuation_kappa(Couplings(beta0=1.0), None, kappas, coarse_line_grid)
    energies = [record.energy for record in records]
    assert [record.kappa0 for record in records] == kappas
    assert all(b < a for a, b in zip(energies, energies[1:]))
    for record in records:
        assert record.converged
        assert record.energy == pytest.approx(closed_form_energy(1.0, record.kappa0), abs=1e-3)
