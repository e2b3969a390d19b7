"""Tests for the data models and their invariants"""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.models.config import GaussianSpec, RunConfig
from app.models.couplings import Couplings, FieldPair, PeriodicModulation, PerturbationProfile
from app.models.enums import Branch, Conclusion, Verdict
from app.models.grid import RadialGrid, ScalarField
from app.models.reports import (
    Barycenter,
    ComparisonReport,
    GroundStateReport,
    SpectrumReport,
    SynchronizedSolution,
    ThresholdReport,
)
from app.solver.grid import make_grid


@pytest.fixture
def small_grid():
    return make_grid(1, 10.0, 201)


def test_radial_grid_rejects_unordered_nodes():
    grid = make_grid(3, 5.0, 11)
    with pytest.raises(ValidationError, match="strictly increasing"):
        RadialGrid(
            dimension=3, radius=5.0, nodes=11, symmetric=False,
            r=grid.r[::-1], weights=grid.weights,
        )


def test_radial_grid_rejects_wrong_measure():
    grid = make_grid(3, 5.0, 11)
    with pytest.raises(ValidationError, match="ball measure"):
        RadialGrid(
            dimension=3, radius=5.0, nodes=11, symmetric=False,
            r=grid.r, weights=2.0 * grid.weights,
        )


def test_grid_arrays_are_read_only(small_grid):
    with pytest.raises(ValueError):
        small_grid.r[0] = 1.0


def test_scalar_field_length_must_match(small_grid):
    with pytest.raises(ValidationError, match="201 nodes"):
        ScalarField(grid=small_grid, values=np.zeros(200))


def test_scalar_field_must_be_finite(small_grid):
    values = np.zeros(201)
    values[3] = np.nan
    with pytest.raises(ValidationError, match="non-finite"):
        ScalarField(grid=small_grid, values=values)


def test_origin_value(small_grid):
    field = ScalarField(grid=small_grid, values=np.exp(-small_grid.r ** 2))
    assert field.origin_value == 1.0
    assert field.sup_norm() == 1.0


def test_couplings_kappa_condition_is_named():
    with pytest.raises(ValidationError, match=r"\(A₀\)"):
        Couplings(kappa0=1.2)


@pytest.mark.parametrize("field,value", [("a0", 0.0), ("b0", -1.0), ("p", 2.0), ("kappa0", -0.1)])
def test_couplings_reject_invalid_values(field, value):
    with pytest.raises(ValidationError):
        Couplings(**{field: value})


def test_couplings_mu():
    assert Couplings(a0=2.0, b0=2.0).mu == 2.0
    assert Couplings(a0=1.0, b0=2.0).mu is None
    assert Couplings(periodic=PeriodicModulation(amplitude_a=0.1)).mu is None


def test_couplings_exponent_range():
    assert Couplings(p=5.9).admits_exponent(3)
    assert not Couplings(p=6.0).admits_exponent(3)
    assert Couplings(p=100.0).admits_exponent(2)


def test_with_kappa_keeps_other_constants():
    c = Couplings(beta0=2.0, kappa0=0.1).with_kappa(0.7)
    assert (c.beta0, c.kappa0) == (2.0, 0.7)


def test_perturbation_must_decay(small_grid):
    with pytest.raises(ValidationError, match="go to zero"):
        PerturbationProfile.from_fields(small_grid, a=np.full(201, 0.1))


def test_non_decaying_perturbation_allowed_when_flagged(small_grid):
    profile = PerturbationProfile(
        grid=small_grid,
        a=np.full(201, 0.1),
        b=np.zeros(201),
        beta=np.zeros(201),
        kappa=np.zeros(201),
        decaying=False,
    )
    assert profile.sup_abs("a") == pytest.approx(0.1)


def test_perturbation_queries(small_grid):
    bump = -0.1 * np.exp(-small_grid.r ** 2)
    profile = PerturbationProfile.from_fields(small_grid, kappa=bump)
    assert not profile.is_zero
    assert profile.is_non_positive()
    assert profile.sup_abs("kappa") == pytest.approx(0.1)
    assert PerturbationProfile.zero(small_grid).is_zero


def test_perturbation_unknown_name(small_grid):
    with pytest.raises(ValueError, match="unknown"):
        PerturbationProfile.from_fields(small_grid, gamma=np.zeros(201))


def test_field_pair_needs_shared_grid(small_grid):
    other = make_grid(1, 10.0, 101)
    with pytest.raises(ValidationError, match="same grid"):
        FieldPair(u=ScalarField.zeros(small_grid), v=ScalarField.zeros(other))


def test_field_pair_helpers(small_grid):
    pair = FieldPair.from_arrays(small_grid, np.ones(201), np.zeros(201))
    assert pair.swapped().v == pair.u
    assert np.array_equal(pair.scaled(2.0).u.values, 2.0 * np.ones(201))
    assert not pair.is_zero
    assert FieldPair.from_arrays(small_grid, np.zeros(201), np.zeros(201)).is_zero


def test_synchronized_solution_sign_pattern(small_grid):
    pair = FieldPair.from_arrays(small_grid, np.zeros(201), np.zeros(201))
    SynchronizedSolution(branch=Branch.Z3, a1=0.5, a2=-0.5, a3=1.0, pair=pair)
    with pytest.raises(ValidationError, match="signs"):
        SynchronizedSolution(branch=Branch.Z1, a1=0.5, a2=-0.5, a3=1.0, pair=pair)
    with pytest.raises(ValidationError):
        SynchronizedSolution(branch=Branch.Z1, a1=0.5, a2=0.6, a3=1.0, pair=pair)


def test_converged_report_must_meet_tolerance(small_grid):
    pair = FieldPair.from_arrays(small_grid, np.ones(201), np.ones(201))
    fields = dict(
        pair=pair, energy=0.5, nehari_residual=0.0, norm_sq=2.0, iterations=10, tol=1e-8,
    )
    GroundStateReport(gradient_norm=1e-3, converged=False, **fields)
    with pytest.raises(ValidationError, match="below tol"):
        GroundStateReport(gradient_norm=1e-3, converged=True, **fields)


def test_spectrum_report_verdict_rule():
    SpectrumReport(eigenvalues=[1.0, 6.0], k_indicator=1.0, verdict=Verdict.NONDEGENERATE, beta0=3.0)
    SpectrumReport(eigenvalues=[1.0, 6.0], k_indicator=-1.0, verdict=Verdict.NONDEGENERATE, beta0=1.0)
    with pytest.raises(ValidationError, match="K-indicator"):
        SpectrumReport(k_indicator=1.0, verdict=Verdict.NONDEGENERATE, beta0=1.0)
    with pytest.raises(ValidationError, match="ascending"):
        SpectrumReport(eigenvalues=[6.0, 1.0], k_indicator=1.0, verdict=Verdict.INCONCLUSIVE, beta0=1.0)


def test_comparison_report_conclusion_consistency():
    fields = dict(criterion01_lhs=1.0, criterion01_rhs=1.0, criterion01=False, less2=False)
    ComparisonReport(criterion02=True, conclusion=Conclusion.EXISTS, **fields)
    ComparisonReport(criterion02=False, conclusion=Conclusion.UNDETERMINED, **fields)
    with pytest.raises(ValidationError):
        ComparisonReport(criterion02=False, criterion04=True, conclusion=Conclusion.UNDETERMINED, **fields)


def test_barycenter_norm():
    assert Barycenter(point=[3.0, 4.0]).norm == 5.0
    with pytest.raises(ValidationError):
        Barycenter(point=[math.inf])


def test_threshold_report_r0_lower_bound():
    with pytest.raises(ValidationError):
        ThresholdReport(r0=0.5, bound=2.0, satisfied=True, max_ratio=0.0)


def test_run_config_defaults_and_grid():
    config = RunConfig()
    grid = config.grid()
    assert grid.key == (1, 20.0, 4001, True)
    assert config.couplings() == Couplings()


def test_run_config_forbids_unknown_keys():
    with pytest.raises(ValidationError):
        RunConfig(kapa0=0.5)


def test_run_config_rejects_off_centre_radial_bumps():
    with pytest.raises(ValidationError, match="center 0"):
        RunConfig(dimension=3, perturbations={"a": {"kind": "gaussian", "amplitude": 0.1, "width": 1.0, "center": 2.0}})


def test_run_config_builds_gaussian_perturbation():
    config = RunConfig(
        radius=10.0,
        nodes=201,
        perturbations={"kappa": {"kind": "gaussian", "amplitude": -0.05, "width": 1.0}},
    )
    assert isinstance(config.perturbations["kappa"], GaussianSpec)
    profile = config.perturbation(config.grid())
    assert profile.sup_abs("kappa") == pytest.approx(0.05)
    assert not np.any(profile.a)
