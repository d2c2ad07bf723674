"""Step definitions for the steady state features."""
import re

import numpy as np
import pytest
from pytest_bdd import given, parsers, then, when

from monotone_pss.network import DriveProblem
from monotone_pss.signal import DriveSpec, Sinusoid, sample_drive
from monotone_pss.solvers import SolverConfig, solve_problem

RESISTANCE = CAPACITANCE = 1.0


def phasor_voltage(times):
    """Steady state voltage of the parallel RC filter under i = sin(2 pi t)."""
    impedance = RESISTANCE / (1 + 2j * np.pi * RESISTANCE * CAPACITANCE)
    return np.real(impedance * np.exp(1j * (2 * np.pi * times - np.pi / 2)))


def phasor_error(network, n):
    drive = sample_drive(DriveSpec(0.0, (Sinusoid(1.0, 1.0),)), n, 1.0)
    report = solve_problem(DriveProblem(network, drive, "current", n, 1.0))
    return np.max(np.abs(np.asarray(report.solution) - phasor_voltage(drive.times)))


@given("the envelope detector", target_fixture="network")
def envelope_network(envelope_detector):
    return envelope_detector


@given("a parallel RC filter", target_fixture="network")
def rc_network(rc_filter):
    return rc_filter


@given(parsers.parse("{n:d} samples per period on the {scale} scale"), target_fixture="grid")
def sampling_grid(n, scale):
    return {"n": n, "scale": scale}


@given(parsers.parse("a {kind} drive with bias {bias:g} and a unit sinusoid"), target_fixture="problem")
def drive_problem(network, grid, kind, bias):
    drive = sample_drive(DriveSpec(bias, (Sinusoid(1.0, 1.0),)), grid["n"], 1.0)
    return DriveProblem(network, drive, kind, grid["n"], 1.0, scale=grid["scale"])


@when("the port response is solved", target_fixture="report")
def solve_port_response(problem):
    return solve_problem(problem)


@when(
    parsers.parse("the port response is solved by Douglas-Rachford with lambda {lambdas}"),
    target_fixture="reports",
)
def solve_douglas_rachford(problem, lambdas):
    values = [float(value) for value in re.split(r",|\band\b", lambdas) if value.strip()]
    return {
        lam: solve_problem(problem, SolverConfig(algorithm="dr", lam=lam, tol=1e-10, max_iter=20000))
        for lam in values
    }


@when(parsers.parse("the phasor error is measured at {coarse:d} and {fine:d} samples"), target_fixture="errors")
def measure_errors(network, coarse, fine):
    return {coarse: phasor_error(network, coarse), fine: phasor_error(network, fine)}


@then(parsers.parse("the solve converges within {max_iter:d} iterations"))
def converges_within(report, max_iter):
    assert report.converged
    assert report.iterations <= max_iter


@then(parsers.parse("the filter voltage has mean {value:g} V within {percent:g}%"))
def filter_mean(report, value, percent):
    voltage = report.audit.branches["root.1"].voltage
    assert np.mean(voltage) == pytest.approx(value, rel=percent / 100)


@then(parsers.parse("every branch satisfies its device law within {tol:g}"))
def branch_residuals(report, tol):
    audit = report.audit
    assert audit.failures == []
    assert {"root.0", "root.1.0", "root.1.1"} <= set(audit.branches)
    assert np.isfinite(audit.branches["root.0"].voltage).all()
    assert audit.device <= tol
    assert audit.worst <= tol


@then("every solve converges")
def every_solve_converges(reports):
    assert len(reports) == 3
    assert all(report.converged for report in reports.values())


@then(parsers.parse("the solutions agree within {tol:g}"))
def solutions_agree(reports, tol):
    reference, *others = (np.asarray(report.solution) for report in reports.values())
    for other in others:
        assert np.max(np.abs(other - reference)) <= tol


@then(parsers.parse("every inclusion residual is at most {tol:g} times the square root of N"))
def inclusion_residuals(reports, problem, tol):
    for report in reports.values():
        assert report.inclusion_residual <= tol * np.sqrt(problem.n)


@then("the diode conducts on part of the period only")
def diode_conducts_partially(reports):
    for report in reports.values():
        conducting = np.asarray(report.solution) > 1e-3
        assert conducting.any()
        assert not conducting.all()


@then(parsers.parse("the voltage matches the phasor solution within {percent:g}% of its amplitude"))
def matches_phasor(report, problem, percent):
    expected = phasor_voltage(problem.drive.times)
    error = np.max(np.abs(np.asarray(report.solution) - expected))
    assert error <= percent / 100 * np.max(np.abs(expected))


@then(parsers.parse("the error at {fine:d} samples is the smaller one"))
def finer_grid_is_better(errors, fine):
    coarse = min(errors)
    assert errors[fine] < errors[coarse]
