"""Algorithm dispatch and driven one-port solves."""
import logging

import numpy as np
import pytest

from monotone_pss.const import Algorithm
from monotone_pss.elements import Capacitor, ShockleyConductanceLaw, ShockleyLaw
from monotone_pss.exceptions import ConfigurationError, DomainError
from monotone_pss.network import DriveProblem, Element, admittance_relation, impedance_relation
from monotone_pss.operators import Congruence, Inverse, Pointwise, Sum
from monotone_pss.signal import DriveSpec, Sinusoid, sample_drive
from monotone_pss.solvers import SolverConfig, predicted_iterations, problem_relation, solve_inclusion, solve_problem

N = 64


def test_predicted_iterations():
    assert predicted_iterations(1.0, 3.0, 1e-8) == 313
    assert predicted_iterations(2.0, 2.0, 1e-8) == 1
    assert predicted_iterations(1.0, 1001.0, 1e-8) > 10000


def test_physical_scale_rc_uses_linear_solve(rc_filter, rng):
    relation = admittance_relation(rc_filter, 500, 1.0)
    target = rng.normal(size=500)

    report = solve_inclusion(relation, target)

    assert report.algorithm == Algorithm.LINEAR_SOLVE
    assert report.converged
    assert report.iterations == 0
    assert np.allclose(relation.apply(report.solution), target)


def test_sample_scale_rc_uses_forward_step(rc_filter, rng):
    relation = admittance_relation(rc_filter, 500, 1.0, scale="sample")

    report = solve_inclusion(relation, rng.normal(size=500))

    assert report.algorithm == Algorithm.FORWARD_STEP
    assert 0 < report.iterations <= 313


def test_douglas_rachford_on_affine_relation(rc_filter, rng):
    relation = admittance_relation(rc_filter, 16, 1.0)
    target = rng.normal(size=16)

    report = solve_inclusion(relation, target, SolverConfig(algorithm="dr", tol=1e-12))

    assert report.algorithm == Algorithm.DOUGLAS_RACHFORD
    assert np.allclose(relation.apply(report.solution), target, atol=1e-8)


def test_pointwise_relation_is_inverted_directly():
    target = np.array([0.0, 0.3, 0.6])

    report = solve_inclusion(Pointwise(ShockleyLaw(), 3), target)

    assert report.algorithm == Algorithm.DIRECT
    assert np.allclose(report.solution, ShockleyConductanceLaw()(target))


def test_top_level_inverse_is_peeled(envelope_detector):
    current = sample_drive(DriveSpec(1.0, (Sinusoid(1.0, 1.0),)), N, 1.0)
    admittance = admittance_relation(envelope_detector, N, 1.0, scale="sample")

    report = solve_inclusion(admittance, current)

    assert isinstance(admittance, Inverse)
    assert report.algorithm == Algorithm.FORWARD_STEP
    assert len(report.nested) == 1
    expected = impedance_relation(envelope_detector, N, 1.0, scale="sample").apply(current.samples)
    assert np.allclose(report.solution, expected, atol=1e-6)


def test_sum_without_constants_or_resolvents():
    relation = Sum((Pointwise(ShockleyLaw(), 2), Congruence(np.eye(2), Pointwise(ShockleyLaw(), 2))))

    with pytest.raises(ConfigurationError, match="No applicable algorithm"):
        solve_inclusion(relation, [1.0, 1.0])


def test_forward_step_on_sum_needs_constants():
    relation = Sum((Pointwise(ShockleyLaw(), 2), Inverse(Pointwise(ShockleyLaw(), 2))))

    with pytest.raises(ConfigurationError):
        solve_inclusion(relation, [1.0, 1.0], SolverConfig(algorithm="forward"))


@pytest.fixture
def sine():
    return sample_drive(DriveSpec(0.0, (Sinusoid(1.0, 1.0),)), N, 1.0)


def test_problem_relation_orientation(rc_filter, sine):
    current_driven = DriveProblem(rc_filter, sine, "current", N, 1.0)

    natural = problem_relation(current_driven, SolverConfig())
    flipped = problem_relation(current_driven, SolverConfig(form="impedance"))

    assert np.allclose(natural.matrix, admittance_relation(rc_filter, N, 1.0).matrix)
    assert np.allclose(flipped.apply(sine.samples), natural.apply(sine.samples))


def test_form_override_gives_the_same_solution(rc_filter, sine):
    problem = DriveProblem(rc_filter, sine, "current", N, 1.0)

    natural = solve_problem(problem)
    flipped = solve_problem(problem, SolverConfig(form="impedance"))

    assert np.allclose(natural.solution, flipped.solution, atol=1e-10)


def test_voltage_driven_rc(rc_filter, sine):
    problem = DriveProblem(rc_filter, sine, "voltage", N, 1.0)

    report = solve_problem(problem)

    expected = admittance_relation(rc_filter, N, 1.0).apply(sine.samples)
    assert report.converged
    assert np.allclose(report.solution, expected)
    assert report.audit.within(1e-9)


def test_envelope_detector_current_drive(envelope_detector):
    drive = sample_drive(DriveSpec(1.0, (Sinusoid(1.0, 1.0),)), N, 1.0)
    problem = DriveProblem(envelope_detector, drive, "current", N, 1.0, scale="sample")

    report = solve_problem(problem)

    assert report.converged
    assert report.solution.period == 1.0
    assert report.audit.failures == []
    assert report.audit.kvl <= 1e-6
    assert report.audit.device <= 1e-6
    assert np.mean(report.audit.branches["root.1"].voltage) == pytest.approx(1.0, rel=1e-2)


def test_envelope_detector_voltage_drive(envelope_detector, sine):
    problem = DriveProblem(envelope_detector, sine, "voltage", N, 1.0, scale="sample")

    report = solve_problem(problem, SolverConfig(tol=1e-9, max_iter=20000))

    current = np.asarray(report.solution)
    assert report.algorithm == Algorithm.DOUGLAS_RACHFORD
    assert report.converged
    assert current.min() > -1e-6
    assert (current > 1e-3).any() and (current < 1e-3).any()
    assert report.audit is not None


def test_biased_current_through_capacitor_is_a_domain_error():
    drive = sample_drive(DriveSpec(1.0, (Sinusoid(1.0, 1.0),)), N, 1.0)
    problem = DriveProblem(Element(Capacitor(1.0)), drive, "current", N, 1.0)

    with pytest.raises(DomainError, match="zero-mean"):
        solve_problem(problem)


def test_solve_problem_logs_summary_last(rc_filter, sine, caplog):
    problem = DriveProblem(rc_filter, sine, "current", N, 1.0, scale="sample")

    with caplog.at_level(logging.INFO, logger="monotone_pss"):
        solve_problem(problem)

    messages = [record.getMessage() for record in caplog.records]
    assert any(message.startswith("audit kcl=") for message in messages)
    assert messages[-1].startswith("converged=True")
