"""Picard, forward step and Douglas-Rachford iterations."""
import logging

import numpy as np
import pytest

from monotone_pss.elements import ShockleyLaw
from monotone_pss.exceptions import ConfigurationError, DivergenceError, DomainError
from monotone_pss.laws import LinearLaw
from monotone_pss.network import admittance_relation
from monotone_pss.operators import AffineOperator, Pointwise, constants_affine, shift
from monotone_pss.signal import DriveSpec, Sinusoid, make_integral, sample_drive
from monotone_pss.solvers import (
    SolverConfig,
    douglas_rachford,
    empirical_contraction,
    forward_step,
    picard,
    predicted_iterations,
)
from monotone_pss.warning_types import StepSizeWarning


def test_picard_converges_to_fixed_point():
    report = picard(lambda x: 0.5 * x + 1.0, [0.0, 10.0], SolverConfig(tol=1e-12))

    assert report.converged
    assert report.algorithm == "picard"
    assert np.allclose(report.solution, [2.0, 2.0])
    assert report.empirical_contraction == pytest.approx(0.5, rel=1e-3)


def test_picard_stops_at_budget():
    report = picard(lambda x: x + 1.0, [0.0], SolverConfig(max_iter=7))

    assert not report.converged
    assert report.iterations == 7
    assert len(report.residual_history) == 7


def test_empirical_contraction():
    history = [1.0, 1.0, 1.0, 1.0, 1.0] + [0.5**k for k in range(10)]

    assert empirical_contraction(history) == pytest.approx(0.5)
    assert empirical_contraction(history, burn_in=0) == pytest.approx(0.5 ** (9 / 14))
    assert empirical_contraction([1.0, 0.5]) is None
    assert empirical_contraction([1.0] * 5 + [0.0, 0.0]) is None


@pytest.fixture
def sample_scale_rc(rc_filter):
    return admittance_relation(rc_filter, 500, 1.0, scale="sample")


@pytest.fixture
def sine():
    return sample_drive(DriveSpec(0.0, (Sinusoid(1.0, 1.0),)), 500, 1.0)


def test_forward_step_contraction_bound(sample_scale_rc, sine):
    m, lipschitz = constants_affine(sample_scale_rc)

    report = forward_step(shift(sample_scale_rc, sine.samples))

    bound = 1.0 - m**2 / lipschitz**2
    assert (m, lipschitz) == (pytest.approx(1.0), pytest.approx(3.0))
    assert report.converged
    assert report.alpha == pytest.approx(1.0 / 9.0)
    assert report.iterations <= predicted_iterations(m, lipschitz, 1e-8)
    assert report.empirical_contraction <= bound + 1e-6
    assert report.empirical_contraction == pytest.approx(bound, abs=1e-3)
    ratios = np.array(report.residual_history[1:]) / np.array(report.residual_history[:-1])
    assert ratios.max() <= bound + 1e-6


def test_forward_step_solution(sample_scale_rc, sine):
    report = forward_step(shift(sample_scale_rc, sine.samples), SolverConfig(tol=1e-12))

    assert np.allclose(sample_scale_rc.apply(report.solution), sine.samples, atol=1e-10)


def test_forward_step_divergence_detector():
    root = np.sqrt(99.0)
    operator = AffineOperator([[1.0, -root], [root, 1.0]])
    m, lipschitz = constants_affine(operator)

    with pytest.warns(StepSizeWarning):
        with pytest.raises(DivergenceError) as excinfo:
            forward_step(shift(operator, [1.0, 1.0]), SolverConfig(alpha=4 * m / lipschitz**2))

    report = excinfo.value.report
    assert not report.converged
    assert 50 <= report.iterations <= 70
    assert report.empirical_contraction == pytest.approx(np.sqrt(1.08), rel=1e-6)


def test_forward_step_needs_constants():
    with pytest.raises(ConfigurationError):
        forward_step(shift(Pointwise(ShockleyLaw(), 3), [1.0, 1.0, 1.0]))


def test_forward_step_reports_domain_iteration():
    relation = shift(make_integral(4, 1.0), [1.0, 0.0, 0.0, 0.0])

    with pytest.raises(DomainError) as excinfo:
        forward_step(relation, SolverConfig(alpha=0.1))
    assert excinfo.value.iteration == 1


def test_forward_step_logs_each_iteration(sample_scale_rc, sine, caplog):
    with caplog.at_level(logging.DEBUG, logger="monotone_pss"):
        report = forward_step(shift(sample_scale_rc, sine.samples))

    messages = [record.getMessage() for record in caplog.records]
    assert messages[0].startswith("iter=0 residual=")
    assert sum(message.startswith("iter=") for message in messages) == report.iterations + 1
    assert messages[-1].startswith("converged=True iterations=")


def test_douglas_rachford_linear_laws():
    target = np.array([3.0, -6.0, 1.5])
    first = shift(Pointwise(LinearLaw(1.0), 3), target)
    second = Pointwise(LinearLaw(2.0), 3)

    report = douglas_rachford(first, second, SolverConfig(lam=0.5, tol=1e-12))

    assert report.converged
    assert report.algorithm == "douglas-rachford"
    assert np.allclose(report.solution, target / 3.0)
    assert report.inclusion_residual == pytest.approx(report.gap / 0.5)


def test_douglas_rachford_diode_and_resistor():
    target = np.array([1.0, 1.5, 2.0, 3.0])
    first = shift(Pointwise(ShockleyLaw(), 4), target)
    second = Pointwise(LinearLaw(1.0), 4)

    report = douglas_rachford(first, second, SolverConfig(tol=1e-12, max_iter=20000))

    current = np.asarray(report.solution)
    assert report.converged
    assert np.allclose(ShockleyLaw()(current) + current, target, atol=1e-8)


def test_douglas_rachford_budget():
    target = np.ones(2)
    report = douglas_rachford(
        shift(Pointwise(LinearLaw(1.0), 2), target), Pointwise(LinearLaw(2.0), 2), SolverConfig(max_iter=1)
    )

    assert not report.converged
    assert report.iterations == 1
    assert len(report.residual_history) == 1
