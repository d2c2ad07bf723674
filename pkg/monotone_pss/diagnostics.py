"""Sampled checks of monotonicity, coercivity, cocoercivity, Lipschitz bounds and resolvent identities.

Pairs of graph points are drawn from a relation through its ``sample_graph`` parametrisation, so
inverse relations are sampled without solving anything. Estimates are bounds from finitely many
trials (upper bounds for coercivity and cocoercivity, lower bounds for Lipschitz constants), never
certified constants.
"""
from __future__ import annotations

import json
import logging
import os.path
from typing import cast

import numpy as np
from attr import attrib, attrs
from mako.lookup import TemplateLookup
from marshmallow import Schema, fields
from numpy.random import Generator, default_rng

from monotone_pss.const import ABS_TOL, DEFAULT_LAMBDAS, DEFAULT_SEED, DEFAULT_TRIALS, RESOLVENT_TOL
from monotone_pss.exceptions import CapabilityError, MonotonePSSError
from monotone_pss.operators import Relation
from monotone_pss.typing import Vector
from monotone_pss.typing.sampler import SamplerProtocol

logger = logging.getLogger(__name__)

template_lookup = TemplateLookup(directories=[os.path.join(os.path.dirname(__file__), "templates")])

DEGENERATE = 1e-14


def _project(points: Vector, zero_mean: bool, floor: float | None) -> Vector:
    if zero_mean:
        points = points - points.mean(axis=1, keepdims=True)
    if floor is not None:
        edge = np.nextafter(floor, np.inf)
        points = np.where(points > floor, points, np.maximum(2 * floor - points, edge))
    return points


@attrs
class UniformPairs(SamplerProtocol):
    """Independent centred uniform draws in [-amplitude, amplitude]."""

    amplitude: float = attrib(default=1.0, converter=float)
    zero_mean: bool = attrib(default=False)
    floor: float | None = attrib(default=None)

    def draw(self, n, trials, rng):
        first = rng.uniform(-self.amplitude, self.amplitude, size=(trials, n))
        second = rng.uniform(-self.amplitude, self.amplitude, size=(trials, n))
        return _project(first, self.zero_mean, self.floor), _project(second, self.zero_mean, self.floor)


@attrs
class HarmonicPairs(SamplerProtocol):
    """Second point = first point + random bias + up to ``harmonics`` low-order sinusoids.

    Drawing zero harmonics gives a pure DC offset, the degenerate direction of reactive elements.
    """

    amplitude: float = attrib(default=1.0, converter=float)
    harmonics: int = attrib(default=3)
    zero_mean: bool = attrib(default=False)
    floor: float | None = attrib(default=None)

    def draw(self, n, trials, rng):
        first = rng.uniform(-self.amplitude, self.amplitude, size=(trials, n))
        phase = 2 * np.pi * np.arange(n) / n
        second = first + rng.uniform(-self.amplitude, self.amplitude, size=(trials, 1))
        counts = rng.integers(0, self.harmonics + 1, size=trials)
        for order in range(1, self.harmonics + 1):
            active = (counts >= order)[:, None]
            weights = rng.uniform(-self.amplitude, self.amplitude, size=(trials, 1))
            shifts = rng.uniform(0, 2 * np.pi, size=(trials, 1))
            second = second + active * weights * np.sin(order * phase[None, :] + shifts)
        return _project(first, self.zero_mean, self.floor), _project(second, self.zero_mean, self.floor)


@attrs
class PropertyReport:
    name: str = attrib()
    trials: int = attrib()
    violations: int = attrib(default=0)
    worst_margin: float | None = attrib(default=None)
    witness: tuple | None = attrib(default=None, repr=False)
    skipped: int = attrib(default=0)
    estimate: float | None = attrib(default=None)
    note: str | None = attrib(default=None)

    @property
    def passed(self) -> bool:
        return self.violations == 0


class PropertyReportSchema(Schema):
    name = fields.Str()
    trials = fields.Int()
    violations = fields.Int()
    worst_margin = fields.Float(allow_none=True)
    estimate = fields.Float(allow_none=True)
    skipped = fields.Int()
    passed = fields.Bool()
    note = fields.Str(allow_none=True)
    witness = fields.Method("dump_witness")

    def dump_witness(self, report):
        if report.witness is None:
            return None
        return [np.asarray(point, dtype=float).tolist() for point in report.witness]


def _rng(rng: Generator | None, seed: int | None) -> Generator:
    return rng if rng is not None else default_rng(DEFAULT_SEED if seed is None else seed)


def _default_sampler(relation: Relation) -> SamplerProtocol:
    return HarmonicPairs(zero_mean=relation.sampling_zero_mean, floor=relation.sampling_floor)


def _graph(relation: Relation, points: Vector) -> tuple[Vector, Vector, Vector]:
    """Graph points for every parameter row; returns inputs, outputs and the mask of usable rows."""
    try:
        inputs, outputs = relation.sample_graph_batch(points)
        inputs, outputs = np.asarray(inputs, dtype=float), np.asarray(outputs, dtype=float)
        usable = np.all(np.isfinite(inputs), axis=1) & np.all(np.isfinite(outputs), axis=1)
        return inputs, outputs, usable
    except MonotonePSSError as e:
        logger.debug("batch graph sampling failed, sampling row by row: %s", e)

    inputs, outputs = np.full(points.shape, np.nan), np.full(points.shape, np.nan)
    for row, point in enumerate(points):
        try:
            inputs[row], outputs[row] = relation.sample_graph(point)
        except MonotonePSSError:
            continue
    usable = np.all(np.isfinite(inputs), axis=1) & np.all(np.isfinite(outputs), axis=1)
    return inputs, outputs, usable


def sample_pairs(relation: Relation, sampler: SamplerProtocol | None, trials: int, rng: Generator):
    """Paired graph inputs u1, u2 and output differences y1 - y2, with the count of unusable pairs."""
    sampler = sampler or _default_sampler(relation)
    first, second = sampler.draw(relation.dimension, trials, rng)
    u1, y1, usable1 = _graph(relation, first)
    u2, y2, usable2 = _graph(relation, second)
    usable = usable1 & usable2
    return u1[usable], u2[usable], y1[usable] - y2[usable], int(trials - usable.sum())


def check_monotone(
    relation: Relation,
    sampler: SamplerProtocol | None = None,
    trials: int = DEFAULT_TRIALS,
    *,
    rng: Generator | None = None,
    seed: int | None = None,
    abs_tol: float = ABS_TOL,
) -> PropertyReport:
    """Count pairs whose pairing <u1 - u2, y1 - y2> falls below -abs_tol."""
    u1, u2, dy, skipped = sample_pairs(relation, sampler, trials, _rng(rng, seed))
    margins = np.einsum("ij,ij->i", u1 - u2, dy)
    report = PropertyReport(name="monotone", trials=trials, skipped=skipped)
    if margins.size == 0:
        report.note = "no usable samples"
        return report
    violating = margins < -abs_tol
    report.violations = int(violating.sum())
    report.worst_margin = float(margins.min())
    if report.violations:
        worst = int(np.argmin(margins))
        report.witness = (u1[worst], u2[worst])
    return report


def _ratio_report(name, relation, sampler, trials, rng, seed, numerator, denominator, reduce) -> PropertyReport:
    u1, u2, dy, skipped = sample_pairs(relation, sampler, trials, _rng(rng, seed))
    du = u1 - u2
    top, bottom = numerator(du, dy), denominator(du, dy)
    keep = bottom > DEGENERATE
    report = PropertyReport(name=name, trials=trials, skipped=skipped + int((~keep).sum()))
    if keep.any():
        report.estimate = float(reduce(top[keep] / bottom[keep]))
    else:
        report.note = "all pairs degenerate"
    return report


def _pairing(du, dy):
    return np.einsum("ij,ij->i", du, dy)


def _input_gap(du, dy):
    return np.einsum("ij,ij->i", du, du)


def _output_gap(du, dy):
    return np.einsum("ij,ij->i", dy, dy)


def _coercivity_report(relation, sampler=None, trials=DEFAULT_TRIALS, *, rng=None, seed=None) -> PropertyReport:
    return _ratio_report("coercivity", relation, sampler, trials, rng, seed, _pairing, _input_gap, np.min)


def _cocoercivity_report(relation, sampler=None, trials=DEFAULT_TRIALS, *, rng=None, seed=None) -> PropertyReport:
    return _ratio_report("cocoercivity", relation, sampler, trials, rng, seed, _pairing, _output_gap, np.min)


def _lipschitz_report(relation, sampler=None, trials=DEFAULT_TRIALS, *, rng=None, seed=None) -> PropertyReport:
    report = _ratio_report("lipschitz", relation, sampler, trials, rng, seed, _output_gap, _input_gap, np.max)
    if report.estimate is not None:
        report.estimate = float(np.sqrt(report.estimate))
    return report


def estimate_coercivity(relation, sampler=None, trials=DEFAULT_TRIALS, *, rng=None, seed=None) -> float | None:
    """min <du, dy> / ||du||^2, an upper bound on the coercivity constant."""
    return _coercivity_report(relation, sampler, trials, rng=rng, seed=seed).estimate


def estimate_cocoercivity(relation, sampler=None, trials=DEFAULT_TRIALS, *, rng=None, seed=None) -> float | None:
    """min <du, dy> / ||dy||^2."""
    return _cocoercivity_report(relation, sampler, trials, rng=rng, seed=seed).estimate


def estimate_lipschitz(relation, sampler=None, trials=DEFAULT_TRIALS, *, rng=None, seed=None) -> float | None:
    """max ||dy|| / ||du||, a lower bound on the Lipschitz constant of the apply map."""
    return _lipschitz_report(relation, sampler, trials, rng=rng, seed=seed).estimate


def check_resolvent(
    relation: Relation,
    sampler: SamplerProtocol | None = None,
    lambdas=DEFAULT_LAMBDAS,
    trials: int = DEFAULT_TRIALS,
    *,
    rng: Generator | None = None,
    seed: int | None = None,
    tol: float = RESOLVENT_TOL,
) -> PropertyReport:
    """Recover graph points u from z = u + lam y through the resolvent."""
    rng = _rng(rng, seed)
    report = PropertyReport(name="resolvent", trials=trials * len(lambdas))
    if not relation.supports_resolvent:
        report.skipped = report.trials
        report.note = f"{type(relation).__name__} does not expose a resolvent"
        return report

    worst = 0.0
    for lam in lambdas:
        inputs, outputs, skipped = _first_points(relation, sampler, trials, rng)
        report.skipped += skipped
        for u, y in zip(inputs, outputs):
            try:
                recovered = np.asarray(relation.resolvent(u + lam * y, lam), dtype=float)
            except CapabilityError as e:
                report.skipped = report.trials
                report.note = str(e)
                return report
            except MonotonePSSError:
                report.skipped += 1
                continue
            margin = float(np.linalg.norm(recovered - u))
            if not np.isfinite(margin) or margin > tol * (1.0 + np.linalg.norm(u)):
                report.violations += 1
                if report.witness is None:
                    report.witness = (u, recovered)
            worst = max(worst, margin) if np.isfinite(margin) else np.inf
    report.worst_margin = worst
    return report


def _first_points(relation, sampler, trials, rng):
    sampler = sampler or _default_sampler(relation)
    first, _ = sampler.draw(relation.dimension, trials, rng)
    inputs, outputs, usable = _graph(relation, first)
    return inputs[usable], outputs[usable], int(trials - usable.sum())


def run_property_suite(
    relation: Relation,
    sampler: SamplerProtocol | None = None,
    trials: int = DEFAULT_TRIALS,
    *,
    seed: int = DEFAULT_SEED,
    lambdas=DEFAULT_LAMBDAS,
) -> list[PropertyReport]:
    rng = default_rng(seed)
    sampler = sampler or _default_sampler(relation)
    return [
        check_monotone(relation, sampler, trials, rng=rng),
        _coercivity_report(relation, sampler, trials, rng=rng),
        _cocoercivity_report(relation, sampler, trials, rng=rng),
        _lipschitz_report(relation, sampler, trials, rng=rng),
        check_resolvent(relation, sampler, lambdas, trials, rng=rng),
    ]


def render_table(sections: dict[str, list[PropertyReport]]) -> str:
    """Human readable table, one block per relation."""
    template = template_lookup.get_template("properties.txt.mak")
    return cast(str, template.render(sections=sections))


def render_json(sections: dict[str, list[PropertyReport]]) -> str:
    schema = PropertyReportSchema(many=True)
    return json.dumps({name: schema.dump(reports) for name, reports in sections.items()}, indent=2)
