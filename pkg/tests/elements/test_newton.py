"""Bracketed root finding."""
import numpy as np
import pytest

from monotone_pss.elements import diode_resolvent_scalar, diode_v_of_i
from monotone_pss.exceptions import ArgumentError, DomainError, NumericalError
from monotone_pss.newton import RootInfo, bisect, expand_bracket, guarded_newton, solve_increasing


def shifted_log(x):
    with np.errstate(divide="ignore", invalid="ignore"):
        return x + np.log1p(x), 1.0 + 1.0 / (1.0 + x)


def test_guarded_newton_matches_bisection():
    root = guarded_newton(shifted_log, (-0.5, 1.0))
    oracle = bisect(shifted_log, (-0.5, 1.0), tol=1e-15)

    assert isinstance(root, float)
    assert root == pytest.approx(0.0, abs=1e-12)
    assert abs(root - oracle) <= 1e-12


def test_guarded_newton_is_vectorised():
    targets = np.array([-1.0, 0.0, 0.5, 2.0])

    def func(x):
        value, slope = shifted_log(x)
        return value - targets, slope

    roots = guarded_newton(func, (np.full(4, -0.9), np.full(4, 3.0)))

    assert np.allclose(roots + np.log1p(roots), targets, atol=1e-12)


def test_guarded_newton_full_output():
    info = guarded_newton(shifted_log, (-0.5, 1.0), full_output=True)

    assert isinstance(info, RootInfo)
    assert info.converged
    assert info.iterations == len(info.history) - 1
    for (lo, hi), x in zip(info.brackets, info.history):
        assert lo[0] <= x[0] <= hi[0]


def test_invalid_bracket():
    with pytest.raises(ArgumentError, match="do not change sign"):
        guarded_newton(shifted_log, (0.5, 1.0))


def test_iteration_budget():
    with pytest.raises(NumericalError):
        bisect(shifted_log, (-0.5, 1.0), tol=0.0, max_iter=3)


def test_expand_bracket_stays_inside_domain():
    def func(x):
        return shifted_log(x)[0] + 2.0, shifted_log(x)[1]

    lo, hi = expand_bracket(func, [0.0], lower=-1.0)

    assert -1.0 < lo[0] <= hi[0]
    assert func(lo)[0][0] <= 0.0 <= func(hi)[0][0]


def test_expand_bracket_outside_range():
    def bounded(x):
        return np.tanh(x) - 2.0, 1.0 - np.tanh(x) ** 2

    with pytest.raises(DomainError):
        expand_bracket(bounded, [0.0])


def test_solve_increasing():
    def cube(x):
        return x**3, 3.0 * x**2

    roots = solve_increasing(cube, [-8.0, 27.0, 1e6])

    assert np.allclose(roots, [-2.0, 3.0, 100.0])


def _voltage_oracle(diode, z, lam):
    # bisection on the voltage form of x + lam * v(x) = z
    nvt, saturation = diode.emission_voltage, diode.saturation_current

    def residual(v):
        with np.errstate(over="ignore"):
            return saturation * np.expm1(v / nvt) + lam * v - z, None

    bracket = (min(z / lam, 0.0), max(z / lam, 0.0))
    voltage = bisect(residual, bracket, tol=0.0, max_iter=2000)
    return saturation * np.expm1(voltage / nvt)


def test_diode_resolvent_matches_bisection_oracle(diode, rng):
    for z, lam in zip(rng.uniform(-1.0, 2.0, size=100), 10.0 ** rng.uniform(-1.0, 1.0, size=100)):
        x = diode_resolvent_scalar(diode, z, lam)
        assert abs(x - _voltage_oracle(diode, z, lam)) <= 1e-10


def test_diode_resolvent_reference_point(diode):
    x = diode_resolvent_scalar(diode, 1.0, 1.0)

    assert x + 0.02585 * np.log(x * 1e14 + 1.0) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize(
    "func, bracket",
    [
        (shifted_log, (-0.5, 1.0)),
        (lambda x: (x**3 - 2.0, 3.0 * x**2), (0.0, 3.0)),
        (lambda x: (np.sinh(x) - 1.0, np.cosh(x)), (-1.0, 5.0)),
        (lambda x: (np.expm1(x) - 0.5, np.exp(x)), (-1.0, 3.0)),
    ],
)
def test_guarded_newton_needs_no_more_iterations_than_bisection(func, bracket):
    newton = guarded_newton(func, bracket, tol=1e-12, full_output=True)
    bisection = bisect(func, bracket, tol=1e-12, full_output=True)

    assert newton.iterations <= bisection.iterations
    assert newton.iterations <= 200
    assert abs(newton.root - bisection.root) <= 1e-10


@pytest.mark.parametrize("z", [-0.9, -1.0, -5.0, -50.0])
def test_diode_resolvent_stays_above_saturation_current(diode, z):
    x = diode_resolvent_scalar(diode, z, 1.0)

    assert x > -diode.saturation_current
    assert np.isfinite(diode_v_of_i(diode, x))
