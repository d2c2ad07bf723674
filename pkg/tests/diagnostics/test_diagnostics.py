"""Sampled property checks."""
import json

import numpy as np
import pytest

from monotone_pss.diagnostics import (
    HarmonicPairs,
    PropertyReport,
    UniformPairs,
    check_monotone,
    check_resolvent,
    estimate_cocoercivity,
    estimate_coercivity,
    estimate_lipschitz,
    render_json,
    render_table,
    run_property_suite,
)
from monotone_pss.elements import Capacitor, ShockleyConductanceLaw, ShockleyLaw, device_admittance, lift_pointwise
from monotone_pss.network import admittance_relation
from monotone_pss.operators import AffineOperator, Pointwise, Sum, add, constants_affine, invert
from monotone_pss.signal import make_derivative
from monotone_pss.typing.sampler import SamplerProtocol


@pytest.fixture
def operator():
    return AffineOperator([[2.0, -1.0], [1.0, 3.0]])


@pytest.fixture
def default_rng():
    return np.random.default_rng(7)


def test_uniform_pairs_projection(default_rng):
    sampler = UniformPairs(zero_mean=True)

    first, second = sampler.draw(5, 20, default_rng)

    assert isinstance(sampler, SamplerProtocol)
    assert first.shape == second.shape == (20, 5)
    assert np.allclose(first.mean(axis=1), 0.0)
    assert np.allclose(second.mean(axis=1), 0.0)


def test_floor_is_respected(default_rng):
    first, second = UniformPairs(floor=-1e-3).draw(4, 50, default_rng)

    assert (first > -1e-3).all()
    assert (second > -1e-3).all()


def test_harmonic_pairs_include_pure_offsets(default_rng):
    first, second = HarmonicPairs(harmonics=2).draw(16, 200, default_rng)

    difference = second - first
    offsets = np.ptp(difference, axis=1) < 1e-12
    assert offsets.any()
    assert not offsets.all()


def test_affine_operator_is_monotone(operator):
    report = check_monotone(operator, seed=1)

    assert report.passed
    assert report.name == "monotone"
    assert report.witness is None
    assert report.worst_margin > 0


def test_non_monotone_operator_has_witness():
    report = check_monotone(AffineOperator([[-1.0, 0.0], [0.0, 1.0]]), UniformPairs(), 200, seed=1)

    assert not report.passed
    assert report.violations > 0
    u1, u2 = report.witness
    assert u1.shape == u2.shape == (2,)


def test_estimates_bracket_exact_constants(operator):
    m, lipschitz = constants_affine(operator)

    assert estimate_coercivity(operator, seed=3) >= m - 1e-12
    assert estimate_lipschitz(operator, seed=3) <= lipschitz + 1e-12
    assert estimate_lipschitz(operator, seed=3) == pytest.approx(lipschitz, rel=0.05)


def test_inverse_coercivity_is_cocoercivity(operator):
    # the inverse is sampled from the same graph points with the roles swapped
    assert estimate_coercivity(invert(operator), seed=11) == pytest.approx(estimate_cocoercivity(operator, seed=11))


def test_capacitor_admittance_is_not_coercive():
    admittance = device_admittance(Capacitor(1.0), 16, 1.0)

    estimate = estimate_coercivity(admittance, seed=5)

    assert estimate == pytest.approx(0.0, abs=1e-9)
    assert check_monotone(admittance, seed=5).passed


def test_derivative_is_cocoercive():
    derivative = make_derivative(16, 1.0)

    assert estimate_cocoercivity(derivative, seed=5) >= 0.5 * derivative.rate ** -1 - 1e-9


def test_all_pairs_degenerate():
    report = run_property_suite(AffineOperator(np.zeros((3, 3))), UniformPairs(), 10)[2]

    assert report.name == "cocoercivity"
    assert report.estimate is None
    assert report.note == "all pairs degenerate"


@pytest.mark.parametrize("relation", [AffineOperator([[2.0, -1.0], [1.0, 3.0]]), Pointwise(ShockleyConductanceLaw(), 3)])
def test_resolvent_recovers_graph_points(relation):
    report = check_resolvent(relation, trials=50, seed=2)

    assert report.trials == 150
    assert report.passed
    assert report.worst_margin <= 1e-8 * 3


def test_resolvent_check_skips_sums():
    relation = Sum((Pointwise(ShockleyLaw(), 2), invert(Pointwise(ShockleyLaw(), 2))))

    report = check_resolvent(relation, trials=10)

    assert report.skipped == report.trials == 30
    assert "resolvent" in report.note


def test_property_suite(operator):
    reports = run_property_suite(operator, trials=100, seed=4)

    assert [report.name for report in reports] == ["monotone", "coercivity", "cocoercivity", "lipschitz", "resolvent"]
    assert all(report.passed for report in reports)
    assert reports == run_property_suite(operator, trials=100, seed=4)


def test_render_table(operator):
    sections = {"Z(root)": run_property_suite(operator, trials=20)}
    sections["Y(root)"] = [PropertyReport(name="monotone", trials=20, violations=3, note="broken")]

    table = render_table(sections)

    assert "Z(root)" in table
    assert "Y(root)" in table
    assert "pass" in table
    assert "FAIL" in table
    assert "note: broken" in table


def test_render_json():
    report = PropertyReport(name="monotone", trials=4, violations=1, witness=(np.zeros(2), np.ones(2)))

    document = json.loads(render_json({"Z(root)": [report]}))

    (dumped,) = document["Z(root)"]
    assert dumped["passed"] is False
    assert dumped["witness"] == [[0.0, 0.0], [1.0, 1.0]]
    assert dumped["estimate"] is None


@pytest.fixture
def lifted_diode(diode):
    return lift_pointwise(diode, 16)


@pytest.fixture
def rc_admittance(rc_filter):
    return admittance_relation(rc_filter, 16, 1.0)


@pytest.mark.acceptance
@pytest.mark.parametrize("name", ["lifted_diode", "rc_admittance"])
def test_reference_relations_are_monotone(request, name):
    report = check_monotone(request.getfixturevalue(name), trials=1000, seed=0)

    assert report.skipped == 0
    assert report.passed
    assert report.worst_margin >= -1e-10


@pytest.mark.acceptance
@pytest.mark.parametrize("name", ["lifted_diode", "rc_admittance"])
def test_reference_resolvents_recover_graph_points(request, name):
    report = check_resolvent(request.getfixturevalue(name), lambdas=(0.1, 1.0, 10.0), trials=1000, seed=0)

    assert report.trials == 3000
    assert report.passed
    assert report.worst_margin <= 1e-8 * (1.0 + np.sqrt(16))


def test_diode_lipschitz_estimate_grows_near_domain_edge(diode):
    lifted = lift_pointwise(diode, 4)

    estimates = [
        estimate_lipschitz(lifted, UniformPairs(amplitude=amplitude, floor=-diode.saturation_current), 200, seed=0)
        for amplitude in (1.0, 1e-3, 1e-6)
    ]

    assert estimates[1] > 100 * estimates[0]
    assert estimates[2] > 100 * estimates[1]


def _random_monotone_affine(rng, n=4):
    factor = rng.normal(size=(n, n))
    skew = rng.normal(size=(n, n))
    return AffineOperator(factor @ factor.T / n + 0.5 * np.eye(n) + skew - skew.T, rng.normal(size=n))


@pytest.mark.acceptance
@pytest.mark.parametrize("seed", range(5))
def test_constant_relations_on_random_affine_operators(seed):
    rng = np.random.default_rng(seed)
    first, second = _random_monotone_affine(rng), _random_monotone_affine(rng)

    cocoercivity = estimate_cocoercivity(first, trials=1000, seed=seed)
    lipschitz = estimate_lipschitz(first, trials=1000, seed=seed)
    inverse_coercivity = estimate_coercivity(invert(first), trials=1000, seed=seed)
    total = add(first, second)

    assert inverse_coercivity == pytest.approx(cocoercivity, rel=1e-12)
    assert lipschitz * cocoercivity <= 1.0 + 1e-9
    assert lipschitz <= first.lipschitz * (1.0 + 1e-12)
    assert isinstance(total, AffineOperator)
    assert total.coercivity >= first.coercivity + second.coercivity - 1e-12
    assert estimate_coercivity(total, trials=1000, seed=seed) >= first.coercivity + second.coercivity - 1e-12
