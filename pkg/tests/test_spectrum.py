"""Tests for the weighted eigenproblem, the decoupling and the nondegeneracy verdict"""
import math

import numpy as np
import pytest

from app.errors import ConfigError, NumericalError
from app.models.couplings import Couplings
from app.models.enums import Branch, Parity, SolitonMethod, Verdict
from app.models.grid import ScalarField
from app.models.reports import SolitonSolution
from app.solver.grid import make_grid
from app.solver.ground_state import build_synchronized
from app.solver.spectrum import (
    PencilSolver,
    coupled_linearization_spectrum,
    decouple,
    descriptor_coefficients,
    descriptor_spectrum,
    k_indicator,
    nondegeneracy_check,
    peak_threshold,
    scaled_eigenvalues,
    weighted_eigenpairs,
    weighted_eigenvalues,
    weighted_rayleigh_quotient,
)


SQRT2 = math.sqrt(2.0)


def test_pencil_sturm_count_on_diagonal_pencil():
    solver = PencilSolver(np.array([1.0, 2.0, 3.0]), np.zeros(2), np.ones(3))
    assert solver.count_below(0.5) == 0
    assert solver.count_below(2.5) == 2
    assert solver.count_below(10.0) == 3
    assert solver.eigenvalue(0) == pytest.approx(1.0, rel=1e-12)
    assert solver.eigenvalue(2) == pytest.approx(3.0, rel=1e-12)


def test_pencil_generalized_eigenvalues_match_dense_solver():
    rng = np.random.default_rng(3)
    diagonal = rng.uniform(2.0, 4.0, 12)
    off = rng.uniform(-0.5, 0.5, 11)
    mass = rng.uniform(0.5, 1.5, 12)
    solver = PencilSolver(diagonal, off, mass)
    dense = np.diag(diagonal) + np.diag(off, 1) + np.diag(off, -1)
    scale = 1.0 / np.sqrt(mass)
    expected = np.linalg.eigvalsh(scale[:, None] * dense * scale[None, :])
    for index in range(4):
        assert solver.eigenvalue(index) == pytest.approx(expected[index], rel=1e-10)
    vector = solver.eigenvector(solver.eigenvalue(0))
    assert solver.rayleigh_quotient(vector) == pytest.approx(expected[0], rel=1e-10)


def test_zero_weight_is_degenerate():
    with pytest.raises(NumericalError, match="weight degenerate"):
        PencilSolver(np.ones(4), np.zeros(3), np.zeros(4))


def test_even_weighted_eigenvalues(soliton_1d):
    eigenvalues = weighted_eigenvalues(soliton_1d, count=2)
    assert eigenvalues[0] == pytest.approx(1.0, abs=1e-6)
    assert eigenvalues[1] > 3.0
    assert eigenvalues[1] == pytest.approx(6.0, abs=1e-3)


def test_full_line_weighted_eigenvalues(soliton_1d):
    eigenvalues = weighted_eigenvalues(soliton_1d, count=3, parity=Parity.FULL)
    assert eigenvalues == pytest.approx([1.0, 3.0, 6.0], abs=1e-3)


def test_three_dimensional_first_eigenvalue(soliton_3d):
    eigenvalues = weighted_eigenvalues(soliton_3d, count=2)
    assert eigenvalues[0] == pytest.approx(1.0, abs=1e-6)
    assert eigenvalues[1] > 1.0


def test_first_eigenvector_is_the_soliton(soliton_1d):
    eigenvalues, vectors = weighted_eigenpairs(soliton_1d, count=2)
    first = np.abs(vectors[0].values)
    folded_peak = soliton_1d.profile.origin_value
    ratio = first[0] / folded_peak
    assert np.allclose(first[:200] / ratio, soliton_1d.profile.values[2000:2200], rtol=1e-5)
    assert weighted_rayleigh_quotient(soliton_1d, vectors[1]) == pytest.approx(eigenvalues[1], rel=1e-8)


def test_weighted_eigenpairs_need_two_values(soliton_1d):
    with pytest.raises(ConfigError):
        weighted_eigenpairs(soliton_1d, count=1)


def test_descriptor_coefficients():
    assert descriptor_coefficients(Couplings(beta0=1.0, kappa0=0.5)) == pytest.approx((1.0, 2.0))
    coefficient, shift = descriptor_coefficients(Couplings(beta0=3.0, kappa0=0.2))
    assert coefficient == 0.0
    assert shift == pytest.approx(0.5)


def test_k_indicator_and_threshold():
    c = Couplings(beta0=1.0, kappa0=0.3)
    assert k_indicator(c, SQRT2) == pytest.approx(1.142857, abs=1e-6)
    assert k_indicator(Couplings(beta0=1.0, kappa0=0.6), SQRT2) == pytest.approx(-1.0)
    assert k_indicator(c, peak_threshold(c)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("beta0,kappa0,verdict", [
    (3.0, 0.1, Verdict.NONDEGENERATE),
    (3.0, 0.5, Verdict.NONDEGENERATE),
    (3.0, 0.9, Verdict.NONDEGENERATE),
    (5.0, 0.1, Verdict.NONDEGENERATE),
    (1.0, 0.6, Verdict.NONDEGENERATE),
    (1.0, 0.3, Verdict.INCONCLUSIVE),
])
def test_nondegeneracy_verdicts(soliton_1d, beta0, kappa0, verdict):
    report = nondegeneracy_check(Couplings(beta0=beta0, kappa0=kappa0), SQRT2, soliton_1d)
    assert report.verdict == verdict
    assert report.kernel_dimension == 0
    assert report.eigenvalues[0] == pytest.approx(1.0, abs=1e-6)
    assert report.consistent is True
    assert set(report.singular_values) == {"A", "B"}


def test_verdict_without_soliton():
    report = nondegeneracy_check(Couplings(beta0=1.0, kappa0=0.3), SQRT2)
    assert report.verdict == Verdict.INCONCLUSIVE
    assert report.k_indicator == pytest.approx(1.142857, abs=1e-6)
    assert report.kernel_dimension is None
    assert report.consistent is None
    assert report.eigenvalues == []


@pytest.mark.parametrize("couplings,message", [
    (Couplings(p=3.0), "p=4"),
    (Couplings(a0=1.0, b0=2.0), "a₀=b₀"),
    (Couplings(beta0=-1.0), "-μ"),
])
def test_nondegeneracy_preconditions(couplings, message):
    with pytest.raises(ConfigError, match=message):
        nondegeneracy_check(couplings, SQRT2)


def test_difference_mode_kernel_at_the_boundary_value(soliton_1d):
    # coefficient 1, shift 0: the difference-mode operator annihilates w
    c = Couplings(beta0=1.0, kappa0=0.0)
    report = nondegeneracy_check(c, SQRT2, soliton_1d)
    assert report.singular_values["B"] < 1e-6
    assert report.kernel_dimension == 1
    assert report.consistent is True


def test_verdict_disagreeing_with_the_discrete_kernel_is_recorded(soliton_1d):
    # w0 = 0 forces K = 0 (nondegenerate) while the difference-mode kernel is present
    report = nondegeneracy_check(Couplings(beta0=1.0, kappa0=0.0), 0.0, soliton_1d)
    assert report.verdict == Verdict.NONDEGENERATE
    assert report.kernel_dimension == 1
    assert report.consistent is False


def test_decouple_rescales_the_grid(line_grid, soliton_1d):
    c = Couplings(beta0=1.0, kappa0=0.5)
    sync = build_synchronized(Branch.Z1, c, soliton_1d, line_grid)
    problem_a, problem_b = decouple(sync, c)
    assert problem_a.potential.grid.radius == pytest.approx(20.0 * math.sqrt(0.5))
    assert problem_a.potential.origin_value == pytest.approx(6.0)
    assert problem_b.potential.origin_value == pytest.approx(2.0 - 2.0)
    assert (problem_b.coefficient, problem_b.shift) == pytest.approx((1.0, 2.0))


def test_decouple_rejects_antisymmetric_branches(line_grid, soliton_1d):
    c = Couplings(beta0=1.0, kappa0=0.5)
    sync = build_synchronized(Branch.Z3, c, soliton_1d, line_grid)
    with pytest.raises(ConfigError, match="z3"):
        decouple(sync, c)


def test_scaled_eigenvalues_match_unit_problem(line_grid, soliton_1d):
    c = Couplings(beta0=1.0, kappa0=0.5)
    sync = build_synchronized(Branch.Z1, c, soliton_1d, line_grid)
    assert scaled_eigenvalues(sync, c, count=2) == pytest.approx([1.0, 6.0], abs=1e-3)


@pytest.mark.parametrize("beta0,kappa0", [(1.0, 0.5), (3.0, 0.3), (0.0, 0.9), (0.5, 0.2)])
def test_scaled_eigenvalues_agree_with_the_rescaled_problem(line_grid, soliton_1d, beta0, kappa0):
    c = Couplings(beta0=beta0, kappa0=kappa0)
    sync = build_synchronized(Branch.Z1, c, soliton_1d, line_grid)
    problem_a, _ = decouple(sync, c)
    rescaled = SolitonSolution(
        profile=ScalarField(grid=problem_a.potential.grid, values=sync.profile_values),
        peak=SQRT2,
        residual=0.0,
        method=SolitonMethod.CLOSED_FORM,
    )
    expected = weighted_eigenvalues(rescaled, count=4)
    assert scaled_eigenvalues(sync, c, count=4) == pytest.approx(expected, rel=1e-6)


@pytest.mark.parametrize("beta0,kappa0", [(1.0, 0.5), (0.5, 0.2)])
def test_coupled_spectrum_is_the_union_of_descriptor_spectra(soliton_1d, beta0, kappa0):
    grid = make_grid(1, 16.0, 801)
    c = Couplings(beta0=beta0, kappa0=kappa0)
    sync = build_synchronized(Branch.Z1, c, soliton_1d, grid)
    problem_a, problem_b = decouple(sync, c)
    union = (1.0 - kappa0) * np.concatenate(
        [descriptor_spectrum(problem_a), descriptor_spectrum(problem_b)]
    )
    count = 6
    nearest = np.sort(union[np.argsort(np.abs(union + 1e-3))[:count]])
    coupled = coupled_linearization_spectrum(sync, c, count=count)
    assert coupled == pytest.approx(nearest.tolist(), abs=1e-7)
