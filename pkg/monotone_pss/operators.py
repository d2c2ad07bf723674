"""Relations on the discrete periodic signal space and their closure operations.

Relations are represented by what they can do: apply (evaluate a selection of the relation),
resolvent (evaluate (I + lam S)^-1) and optional coercivity/Lipschitz constants. Linear relations
are kept in image form {(P w + a, Q w + b)} so that inverses, sums, congruences and
concatenations of linear relations stay linear and exact.
"""
from __future__ import annotations

import logging
from abc import ABCMeta, abstractmethod
from functools import cached_property, reduce
from itertools import accumulate
from typing import Any

import numpy as np
from attr import attrib, attrs
from scipy import linalg

from monotone_pss.const import INNER_MAX_ITER, INNER_TOL, ZERO_MEAN_RTOL
from monotone_pss.exceptions import (
    ArgumentError,
    CapabilityError,
    ConstructionError,
    DomainError,
    NumericalError,
)
from monotone_pss.laws import LinearLaw, ScalarLaw, SumLaw
from monotone_pss.typing import Vector
from monotone_pss.utils import as_vector, check_positive, is_identity, like

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e12
MONOTONE_RTOL = 1e-10
RANGE_RTOL = ZERO_MEAN_RTOL
RANK_RTOL = 1e-10


def _matrix(value) -> Vector:
    matrix = np.array(value, dtype=float, ndmin=2)
    if matrix.ndim != 2:
        raise ArgumentError(f"Expected a matrix, got shape {matrix.shape}")
    return matrix


def _condition(matrix: Vector) -> float:
    if matrix.shape[0] != matrix.shape[1] or matrix.size == 0:
        return np.inf
    with np.errstate(all="ignore"):
        condition = float(np.linalg.cond(matrix))
    return condition if np.isfinite(condition) else np.inf


class Relation(metaclass=ABCMeta):
    """Relation on R^n exposing apply and resolvent capabilities."""

    @property
    @abstractmethod
    def dimension(self) -> int:
        ...

    def apply(self, u):
        """Evaluate the relation at u; signals come back as signals."""
        return like(u, self._apply(as_vector(u, self.dimension, name="input")))

    def resolvent(self, z, lam: float):
        """Evaluate (I + lam * S)^-1 at z."""
        lam = check_positive("lambda", lam)
        return like(z, self._resolvent(as_vector(z, self.dimension, name="input"), lam))

    def __call__(self, u):
        return self.apply(u)

    @abstractmethod
    def _apply(self, u: Vector) -> Vector:
        ...

    def _resolvent(self, z: Vector, lam: float) -> Vector:
        raise CapabilityError(f"{type(self).__name__} does not expose a resolvent")

    @property
    def supports_resolvent(self) -> bool:
        return True

    def check_domain(self, u) -> None:
        """Raise DomainError when u is known to be outside the domain."""

    @property
    def coercivity(self) -> float | None:
        return None

    @property
    def lipschitz(self) -> float | None:
        return None

    @property
    def constants(self) -> tuple[float | None, float | None]:
        return self.coercivity, self.lipschitz

    def inverse(self) -> Relation:
        return Inverse(self)

    def sample_graph(self, x: Vector) -> tuple[Vector, Vector]:
        """A point (u, y) of the graph parametrised by x."""
        return x, self._apply(x)

    def sample_graph_batch(self, points: Vector) -> tuple[Vector, Vector]:
        pairs = [self.sample_graph(point) for point in points]
        inputs, outputs = zip(*pairs) if pairs else ((), ())
        return np.array(inputs).reshape(points.shape), np.array(outputs).reshape(points.shape)

    @property
    def sampling_floor(self) -> float | None:
        """Lower bound for the sample_graph parameter."""
        return None

    @property
    def sampling_zero_mean(self) -> bool:
        """Whether the sample_graph parameter has to be zero mean."""
        return False

    @property
    def iterative_inversions(self) -> int:
        return 0


@attrs(eq=False, repr=False)
class LinearRelation(Relation):
    """Linear relation {(P w + a, Q w + b)} in image form."""

    input_map = attrib(converter=_matrix)
    output_map = attrib(converter=_matrix)
    input_offset = attrib(default=None)
    output_offset = attrib(default=None)
    _factors: dict = attrib(factory=dict, init=False)

    def __attrs_post_init__(self):
        if self.input_map.shape != self.output_map.shape:
            raise ArgumentError(f"Input map {self.input_map.shape} and output map {self.output_map.shape} differ")
        n = self.input_map.shape[0]
        self.input_offset = np.zeros(n) if self.input_offset is None else as_vector(self.input_offset, n)
        self.output_offset = np.zeros(n) if self.output_offset is None else as_vector(self.output_offset, n)

    def __repr__(self):
        return f"{type(self).__name__}(dimension={self.dimension}, latent={self.input_map.shape[1]})"

    @property
    def dimension(self):
        return self.input_map.shape[0]

    @cached_property
    def _input_lu(self):
        if _condition(self.input_map) < CONDITION_LIMIT:
            return linalg.lu_factor(self.input_map)
        return None

    def _latent(self, u: Vector) -> Vector:
        rhs = u - self.input_offset
        if self._input_lu is not None:
            return linalg.lu_solve(self._input_lu, rhs)
        latent, *_ = linalg.lstsq(self.input_map, rhs, cond=RANK_RTOL)
        residual = np.linalg.norm(self.input_map @ latent - rhs)
        if residual > RANGE_RTOL * (np.linalg.norm(rhs) + 1.0):
            raise DomainError(self._domain_message(rhs))
        return latent

    def _domain_message(self, rhs: Vector) -> str:
        offset = float(np.mean(rhs))
        if self.sampling_zero_mean and abs(offset) > RANGE_RTOL * (np.linalg.norm(rhs) + 1.0):
            return f"Input mean {offset:.6g} violates the zero-mean constraint of the relation domain"
        return "Input is outside the domain of the linear relation"

    def _apply(self, u):
        return self.output_map @ self._latent(u) + self.output_offset

    def check_domain(self, u):
        self._latent(as_vector(u, self.dimension))

    def _resolvent_factor(self, lam: float):
        if lam not in self._factors:
            system = self.input_map + lam * self.output_map
            condition = _condition(system)
            if condition >= CONDITION_LIMIT:
                raise NumericalError(f"Resolvent system is singular at lambda={lam!r}", condition=condition)
            self._factors[lam] = linalg.lu_factor(system)
        return self._factors[lam]

    def _resolvent(self, z, lam):
        latent = linalg.lu_solve(self._resolvent_factor(lam), z - self.input_offset - lam * self.output_offset)
        return self.input_map @ latent + self.input_offset

    @cached_property
    def is_monotone(self) -> bool:
        pairing = self.input_map.T @ self.output_map
        symmetric = 0.5 * (pairing + pairing.T)
        smallest = np.linalg.eigvalsh(symmetric)[0] if symmetric.size else 0.0
        return bool(smallest >= -MONOTONE_RTOL * max(1.0, np.abs(symmetric).max(initial=0.0)))

    @cached_property
    def as_affine(self) -> AffineOperator | None:
        """Explicit function form Q P^-1 when P is invertible."""
        if self._input_lu is None:
            return None
        matrix = linalg.lu_solve(self._input_lu, self.output_map.T, trans=1).T
        return AffineOperator(matrix, self.output_offset - matrix @ self.input_offset)

    @property
    def coercivity(self):
        affine = self.as_affine
        return None if affine is None else affine.coercivity

    @property
    def lipschitz(self):
        affine = self.as_affine
        return None if affine is None else affine.lipschitz

    def inverse(self):
        return linear_relation(self.output_map, self.input_map, self.output_offset, self.input_offset)

    def sample_graph(self, x):
        if self.input_map.shape[1] != x.shape[0]:
            return super().sample_graph(x)
        return self.input_map @ x + self.input_offset, self.output_map @ x + self.output_offset

    def sample_graph_batch(self, points):
        if self.input_map.shape[1] != points.shape[1]:
            return super().sample_graph_batch(points)
        return points @ self.input_map.T + self.input_offset, points @ self.output_map.T + self.output_offset

    @cached_property
    def sampling_zero_mean(self):
        column_sums = self.input_map.sum(axis=0)
        scale = max(1.0, np.abs(self.input_map).max(initial=0.0)) * np.sqrt(self.dimension)
        return bool(self.input_map.shape[1] > 0 and np.abs(column_sums).max() <= RANGE_RTOL * scale)


class AffineOperator(LinearRelation):
    """Function x -> A x + b with exact constants."""

    def __init__(self, matrix, offset=None):
        matrix = _matrix(matrix)
        if matrix.shape[0] != matrix.shape[1]:
            raise ArgumentError(f"Affine operator needs a square matrix, got {matrix.shape}")
        n = matrix.shape[0]
        super().__init__(np.eye(n), matrix, np.zeros(n), offset)

    @property
    def matrix(self) -> Vector:
        return self.output_map

    @property
    def offset(self) -> Vector:
        return self.output_offset

    def _apply(self, u):
        return self.matrix @ u + self.offset

    def _latent(self, u):
        return u

    def check_domain(self, u):
        as_vector(u, self.dimension)

    @cached_property
    def _input_lu(self):
        return None

    @cached_property
    def exact_constants(self) -> tuple[float, float]:
        symmetric = 0.5 * (self.matrix + self.matrix.T)
        smallest = float(np.linalg.eigvalsh(symmetric)[0])
        largest = float(np.linalg.norm(self.matrix, 2))
        return smallest, largest

    @property
    def coercivity(self):
        m, lipschitz = self.exact_constants
        if m >= -MONOTONE_RTOL * max(lipschitz, 1.0):
            return max(m, 0.0)
        return None

    @property
    def lipschitz(self):
        return self.exact_constants[1]

    @cached_property
    def is_monotone(self):
        return self.coercivity is not None

    @cached_property
    def as_affine(self):
        return self

    @cached_property
    def sampling_zero_mean(self):
        return False

    def inverse(self):
        return LinearRelation(self.matrix, np.eye(self.dimension), self.offset, np.zeros(self.dimension))

    @property
    def is_zero(self) -> bool:
        return not (self.matrix.any() or self.offset.any())


def _compress(input_map: Vector, output_map: Vector) -> tuple[Vector, Vector]:
    # Orthonormal graph basis with input directions below RANK_RTOL set to exactly zero.
    n = input_map.shape[0]
    stacked = np.vstack([input_map, output_map])
    if not stacked.size:
        return input_map, output_map
    basis = linalg.orth(stacked, rcond=RANK_RTOL)
    _, values, right = linalg.svd(basis[:n], full_matrices=True)
    negligible = np.ones(basis.shape[1], dtype=bool)
    negligible[: values.size] = values <= RANK_RTOL
    input_part, output_part = basis[:n] @ right.T, basis[n:] @ right.T
    input_part[:, negligible] = 0.0
    return input_part, output_part


def linear_relation(input_map, output_map, input_offset=None, output_offset=None) -> LinearRelation:
    """Build a linear relation in image form, returning an AffineOperator when it is a function."""
    input_map, output_map = _matrix(input_map), _matrix(output_map)
    n = input_map.shape[0]
    input_offset = np.zeros(n) if input_offset is None else as_vector(input_offset, n)
    output_offset = np.zeros(n) if output_offset is None else as_vector(output_offset, n)
    if is_identity(input_map):
        return AffineOperator(output_map, output_offset - output_map @ input_offset)
    if input_map.shape[1] != n or _condition(input_map) >= CONDITION_LIMIT:
        input_map, output_map = _compress(input_map, output_map)
    return LinearRelation(input_map, output_map, input_offset, output_offset)


@attrs(eq=False)
class Pointwise(Relation):
    """Scalar law applied independently at every sample."""

    law: ScalarLaw = attrib()
    size: int = attrib()

    @property
    def dimension(self):
        return self.size

    def _apply(self, u):
        return self.law.value(u)

    def _resolvent(self, z, lam):
        return self.law.resolvent(z, lam)

    def check_domain(self, u):
        self.law.check_domain(as_vector(u, self.dimension))

    @property
    def coercivity(self):
        m, _ = self.law.slope_bounds()
        return None if m is None or m < 0 else float(m)

    @property
    def lipschitz(self):
        _, lipschitz = self.law.slope_bounds()
        return None if lipschitz is None else float(lipschitz)

    def inverse(self):
        return Pointwise(self.law.inverse(), self.size)

    @property
    def as_affine(self) -> AffineOperator | None:
        if isinstance(self.law, LinearLaw):
            return AffineOperator(self.law.gain * np.eye(self.size))
        return None

    def sample_graph(self, x):
        return self.law.graph(x)

    def sample_graph_batch(self, points):
        inputs, outputs = self.law.graph(points.ravel())
        return inputs.reshape(points.shape), outputs.reshape(points.shape)

    @property
    def sampling_floor(self):
        return self.law.sampling_floor


@attrs(eq=False)
class Sum(Relation):
    """Sum of relations that do not collapse into one linear or pointwise relation."""

    terms: tuple = attrib(converter=tuple)

    @property
    def dimension(self):
        return self.terms[0].dimension

    def _apply(self, u):
        total = np.zeros(self.dimension)
        for index, term in enumerate(self.terms):
            try:
                total = total + term._apply(u)
            except DomainError as e:
                raise DomainError(
                    f"Summand {index} ({type(term).__name__}) rejected the input: {e.message}", index=e.index
                ) from e
        return total

    @property
    def supports_resolvent(self):
        return False

    def check_domain(self, u):
        for term in self.terms:
            term.check_domain(u)

    @property
    def coercivity(self):
        values = [term.coercivity for term in self.terms]
        return None if any(value is None for value in values) else float(sum(values))

    @property
    def lipschitz(self):
        values = [term.lipschitz for term in self.terms]
        return None if any(value is None for value in values) else float(sum(values))

    @property
    def sampling_floor(self):
        floors = [term.sampling_floor for term in self.terms if term.sampling_floor is not None]
        return max(floors) if floors else None

    @property
    def sampling_zero_mean(self):
        return any(term.sampling_zero_mean for term in self.terms)

    @property
    def iterative_inversions(self):
        return sum(term.iterative_inversions for term in self.terms)


@attrs(eq=False)
class Scaled(Relation):
    alpha: float = attrib(converter=float)
    inner: Relation = attrib()

    @property
    def dimension(self):
        return self.inner.dimension

    def _apply(self, u):
        return self.alpha * self.inner._apply(u)

    def _resolvent(self, z, lam):
        return self.inner._resolvent(z, lam * self.alpha)

    @property
    def supports_resolvent(self):
        return self.inner.supports_resolvent

    def check_domain(self, u):
        self.inner.check_domain(u)

    @property
    def coercivity(self):
        m = self.inner.coercivity
        return None if m is None else self.alpha * m

    @property
    def lipschitz(self):
        lipschitz = self.inner.lipschitz
        return None if lipschitz is None else self.alpha * lipschitz

    def sample_graph(self, x):
        inputs, outputs = self.inner.sample_graph(x)
        return inputs, self.alpha * outputs

    @property
    def sampling_floor(self):
        return self.inner.sampling_floor

    @property
    def sampling_zero_mean(self):
        return self.inner.sampling_zero_mean

    @property
    def iterative_inversions(self):
        return self.inner.iterative_inversions


@attrs(eq=False)
class Shifted(Relation):
    """The relation u -> S(u) - offset."""

    inner: Relation = attrib()
    offset = attrib(converter=lambda value: np.asarray(value, dtype=float))

    @property
    def dimension(self):
        return self.inner.dimension

    def _apply(self, u):
        return self.inner._apply(u) - self.offset

    def _resolvent(self, z, lam):
        return self.inner._resolvent(z + lam * self.offset, lam)

    @property
    def supports_resolvent(self):
        return self.inner.supports_resolvent

    def check_domain(self, u):
        self.inner.check_domain(u)

    @property
    def coercivity(self):
        return self.inner.coercivity

    @property
    def lipschitz(self):
        return self.inner.lipschitz

    def sample_graph(self, x):
        inputs, outputs = self.inner.sample_graph(x)
        return inputs, outputs - self.offset

    @property
    def sampling_floor(self):
        return self.inner.sampling_floor

    @property
    def sampling_zero_mean(self):
        return self.inner.sampling_zero_mean

    @property
    def iterative_inversions(self):
        return self.inner.iterative_inversions


@attrs(eq=False)
class Congruence(Relation):
    """x -> M^T F(M x)."""

    matrix = attrib(converter=_matrix)
    inner: Relation = attrib()

    @property
    def dimension(self):
        return self.matrix.shape[1]

    def _apply(self, x):
        return self.matrix.T @ self.inner._apply(self.matrix @ x)

    @property
    def supports_resolvent(self):
        return False

    @cached_property
    def _singular_values(self):
        return linalg.svdvals(self.matrix)

    @property
    def coercivity(self):
        m = self.inner.coercivity
        values = self._singular_values
        if m is None:
            return None
        if values.size < self.dimension:
            return 0.0
        return float(m * values.min() ** 2)

    @property
    def lipschitz(self):
        lipschitz = self.inner.lipschitz
        return None if lipschitz is None else float(lipschitz * self._singular_values.max(initial=0.0) ** 2)

    @property
    def iterative_inversions(self):
        return self.inner.iterative_inversions


@attrs(eq=False)
class Concatenation(Relation):
    """Block relation (x_1, ..., x_k) -> (S_1(x_1), ..., S_k(x_k))."""

    parts: tuple = attrib(converter=tuple)

    @property
    def dimension(self):
        return sum(part.dimension for part in self.parts)

    def _split(self, x):
        bounds = list(accumulate(part.dimension for part in self.parts))[:-1]
        return np.split(x, bounds)

    def _apply(self, x):
        return np.concatenate([part._apply(piece) for part, piece in zip(self.parts, self._split(x))])

    def _resolvent(self, z, lam):
        return np.concatenate([part._resolvent(piece, lam) for part, piece in zip(self.parts, self._split(z))])

    @property
    def supports_resolvent(self):
        return all(part.supports_resolvent for part in self.parts)

    def check_domain(self, x):
        for part, piece in zip(self.parts, self._split(as_vector(x, self.dimension))):
            part.check_domain(piece)

    @property
    def coercivity(self):
        values = [part.coercivity for part in self.parts]
        return None if any(value is None for value in values) else float(min(values))

    @property
    def lipschitz(self):
        values = [part.lipschitz for part in self.parts]
        return None if any(value is None for value in values) else float(max(values))

    def sample_graph(self, x):
        pieces = [part.sample_graph(piece) for part, piece in zip(self.parts, self._split(x))]
        return np.concatenate([inputs for inputs, _ in pieces]), np.concatenate([outputs for _, outputs in pieces])

    @property
    def iterative_inversions(self):
        return sum(part.iterative_inversions for part in self.parts)


@attrs(eq=False)
class Inverse(Relation):
    """Relational inverse evaluated by nested inclusion solves."""

    inner: Relation = attrib()
    config: Any = attrib(default=None)

    @property
    def dimension(self):
        return self.inner.dimension

    def _apply(self, y):
        from monotone_pss.solvers import SolverConfig, solve_inclusion

        config = self.config or SolverConfig(tol=INNER_TOL, max_iter=INNER_MAX_ITER)
        report = solve_inclusion(self.inner, y, config)
        if not report.converged:
            raise NumericalError(
                f"Inner {report.algorithm} solve for the inverse relation stopped after {report.iterations} iterations"
            )
        return np.asarray(report.solution, dtype=float)

    def _resolvent(self, z, lam):
        return z - lam * self.inner._resolvent(z / lam, 1.0 / lam)

    @property
    def supports_resolvent(self):
        return self.inner.supports_resolvent

    @property
    def coercivity(self):
        m, lipschitz = self.inner.coercivity, self.inner.lipschitz
        if m and lipschitz:
            return float(m / lipschitz**2)
        return None

    @property
    def lipschitz(self):
        m = self.inner.coercivity
        return float(1.0 / m) if m else None

    def inverse(self):
        return self.inner

    def sample_graph(self, x):
        inputs, outputs = self.inner.sample_graph(x)
        return outputs, inputs

    def sample_graph_batch(self, points):
        inputs, outputs = self.inner.sample_graph_batch(points)
        return outputs, inputs

    @property
    def sampling_floor(self):
        return self.inner.sampling_floor

    @property
    def sampling_zero_mean(self):
        return self.inner.sampling_zero_mean

    @property
    def iterative_inversions(self):
        return 1 + self.inner.iterative_inversions


def identity(n: int) -> AffineOperator:
    return AffineOperator(np.eye(n))


def zero(n: int) -> AffineOperator:
    return AffineOperator(np.zeros((n, n)))


def invert(relation: Relation) -> Relation:
    """Relational inverse: (u, y) is in the result iff (y, u) is in relation."""
    return relation.inverse()


def _check_dimensions(relations) -> int:
    dimensions = {relation.dimension for relation in relations}
    if len(dimensions) != 1:
        raise ArgumentError(f"Relations act on different dimensions: {sorted(dimensions)}")
    return dimensions.pop()


def _particular_and_kernel(blocks: list[Vector], rhs: Vector, message: str) -> tuple[Vector, Vector]:
    """Particular solution and kernel basis of [B_1 ... B_k] w = rhs, with ranks decided per block scale."""
    stacked = np.hstack(blocks)
    particular, *_ = linalg.lstsq(stacked, rhs, cond=RANK_RTOL)
    if np.linalg.norm(stacked @ particular - rhs) > RANGE_RTOL * (np.linalg.norm(rhs) + 1.0):
        raise ConstructionError(message)
    scales = np.concatenate([np.full(block.shape[1], np.linalg.norm(block, 2) or 1.0) for block in blocks])
    kernel = linalg.null_space(stacked / scales, rcond=RANK_RTOL)
    return particular, kernel / scales[:, None]


def _add_linear(first: LinearRelation, second: LinearRelation) -> LinearRelation:
    if isinstance(first, AffineOperator) and isinstance(second, AffineOperator):
        return AffineOperator(first.matrix + second.matrix, first.offset + second.offset)
    if isinstance(second, AffineOperator):
        first, second = second, first
    if isinstance(first, AffineOperator):
        # x = P w + a, y = A x + c + Q w + b
        return linear_relation(
            second.input_map,
            first.matrix @ second.input_map + second.output_map,
            second.input_offset,
            first.matrix @ second.input_offset + first.offset + second.output_offset,
        )

    k = first.input_map.shape[1]
    particular, kernel = _particular_and_kernel(
        [first.input_map, -second.input_map],
        second.input_offset - first.input_offset,
        "Summands have disjoint domains",
    )
    first_kernel, second_kernel = kernel[:k], kernel[k:]
    first_particular, second_particular = particular[:k], particular[k:]
    return linear_relation(
        first.input_map @ first_kernel,
        first.output_map @ first_kernel + second.output_map @ second_kernel,
        first.input_map @ first_particular + first.input_offset,
        first.output_map @ first_particular
        + first.output_offset
        + second.output_map @ second_particular
        + second.output_offset,
    )


def _flatten(relations):
    for relation in relations:
        if isinstance(relation, Sum):
            yield from _flatten(relation.terms)
        else:
            yield relation


def add(*relations: Relation) -> Relation:
    """Sum of relations, collapsing linear and pointwise summands."""
    if not relations:
        raise ArgumentError("add needs at least one relation")
    n = _check_dimensions(relations)
    terms = list(_flatten(relations))
    nonzero = [term for term in terms if not (isinstance(term, AffineOperator) and term.is_zero)]
    if not nonzero:
        return zero(n)

    has_linear = any(isinstance(term, LinearRelation) for term in nonzero)
    linear: list[LinearRelation] = []
    pointwise: list[Pointwise] = []
    others: list[Relation] = []
    for term in nonzero:
        if isinstance(term, LinearRelation):
            linear.append(term)
        elif isinstance(term, Pointwise) and isinstance(term.law, LinearLaw) and has_linear:
            linear.append(term.as_affine)
        elif isinstance(term, Pointwise):
            pointwise.append(term)
        else:
            others.append(term)

    parts: list[Relation] = []
    if len(pointwise) == 1:
        parts.append(pointwise[0])
    elif pointwise and all(isinstance(term.law, LinearLaw) for term in pointwise):
        parts.append(Pointwise(LinearLaw(sum(term.law.gain for term in pointwise)), n))
    elif pointwise:
        parts.append(Pointwise(SumLaw(tuple(term.law for term in pointwise)), n))
    parts.extend(others)
    if linear:
        parts.append(reduce(_add_linear, linear))
    return parts[0] if len(parts) == 1 else Sum(tuple(parts))


def scale(alpha: float, relation: Relation) -> Relation:
    """alpha * S for alpha > 0."""
    alpha = float(alpha)
    if not (np.isfinite(alpha) and alpha > 0):
        raise ArgumentError(f"Scaling factor must be positive, got {alpha!r}")
    if alpha == 1.0:
        return relation
    if isinstance(relation, AffineOperator):
        return AffineOperator(alpha * relation.matrix, alpha * relation.offset)
    if isinstance(relation, LinearRelation):
        return linear_relation(
            relation.input_map, alpha * relation.output_map, relation.input_offset, alpha * relation.output_offset
        )
    if isinstance(relation, Pointwise):
        return Pointwise(relation.law.scaled(alpha), relation.size)
    if isinstance(relation, Scaled):
        return scale(alpha * relation.alpha, relation.inner)
    return Scaled(alpha, relation)


def shift(relation: Relation, offset) -> Relation:
    """The relation u -> S(u) - offset."""
    offset = as_vector(offset, relation.dimension, name="offset")
    if not offset.any():
        return relation
    if isinstance(relation, LinearRelation):
        return linear_relation(
            relation.input_map, relation.output_map, relation.input_offset, relation.output_offset - offset
        )
    if isinstance(relation, Shifted):
        return Shifted(relation.inner, relation.offset + offset)
    return Shifted(relation, offset)


def congruence(matrix, relation: Relation) -> Relation:
    """x -> M^T F(M x) for an s x t matrix M and a relation F on R^s."""
    matrix = _matrix(matrix)
    if matrix.shape[0] != relation.dimension:
        raise ArgumentError(
            f"Matrix with {matrix.shape[0]} rows does not fit a relation of dimension {relation.dimension}"
        )
    if is_identity(matrix):
        return relation
    if isinstance(relation, AffineOperator):
        return AffineOperator(matrix.T @ relation.matrix @ matrix, matrix.T @ relation.offset)
    if isinstance(relation, LinearRelation):
        t = matrix.shape[1]
        particular, kernel = _particular_and_kernel(
            [matrix, -relation.input_map],
            relation.input_offset,
            "Congruence matrix does not reach the relation domain",
        )
        return linear_relation(
            kernel[:t],
            matrix.T @ relation.output_map @ kernel[t:],
            particular[:t],
            matrix.T @ (relation.output_map @ particular[t:] + relation.output_offset),
        )
    return Congruence(matrix, relation)


def concatenate(*relations: Relation) -> Relation:
    """Block diagonal relation acting on stacked signals."""
    if not relations:
        raise ArgumentError("concatenate needs at least one relation")
    if len(relations) == 1:
        return relations[0]
    if all(isinstance(relation, AffineOperator) for relation in relations):
        return AffineOperator(
            linalg.block_diag(*(relation.matrix for relation in relations)),
            np.concatenate([relation.offset for relation in relations]),
        )
    if all(isinstance(relation, LinearRelation) for relation in relations):
        return linear_relation(
            linalg.block_diag(*(relation.input_map for relation in relations)),
            linalg.block_diag(*(relation.output_map for relation in relations)),
            np.concatenate([relation.input_offset for relation in relations]),
            np.concatenate([relation.output_offset for relation in relations]),
        )
    return Concatenation(tuple(relations))


def _require_affine(operator) -> AffineOperator:
    if not isinstance(operator, AffineOperator):
        raise ArgumentError(f"Expected an AffineOperator, got {type(operator).__name__}")
    return operator


def apply_affine(operator: AffineOperator, u):
    """A u + b."""
    return _require_affine(operator).apply(u)


def resolvent_affine(operator: AffineOperator, z, lam: float):
    """Solve (I + lam A) x = z - lam b."""
    return _require_affine(operator).resolvent(z, lam)


def resolvent_of_inverse_affine(operator: AffineOperator, z, lam: float):
    """(I + lam A^-1)^-1 z, computed from (A + lam I) y = A z + lam b."""
    operator = _require_affine(operator)
    lam = check_positive("lambda", lam)
    vector = as_vector(z, operator.dimension)
    system = operator.matrix + lam * np.eye(operator.dimension)
    condition = _condition(system)
    if condition >= CONDITION_LIMIT:
        raise NumericalError(f"(A + lambda I) is singular at lambda={lam!r}", condition=condition)
    return like(z, linalg.solve(system, operator.matrix @ vector + lam * operator.offset))


def constants_affine(operator: AffineOperator) -> tuple[float, float]:
    """Smallest eigenvalue of the symmetric part (may be negative) and largest singular value."""
    return _require_affine(operator).exact_constants


def is_monotone(relation: Relation) -> bool | None:
    """Exact answer for linear relations, None when unknown."""
    if isinstance(relation, LinearRelation):
        return relation.is_monotone
    if isinstance(relation, Pointwise):
        m, _ = relation.law.slope_bounds()
        return None if m is None else m >= 0
    return None


__all__ = [
    "AffineOperator",
    "Concatenation",
    "Congruence",
    "Inverse",
    "LinearRelation",
    "Pointwise",
    "Relation",
    "Scaled",
    "Shifted",
    "Sum",
    "add",
    "apply_affine",
    "concatenate",
    "congruence",
    "constants_affine",
    "identity",
    "invert",
    "is_monotone",
    "linear_relation",
    "resolvent_affine",
    "resolvent_of_inverse_affine",
    "scale",
    "shift",
    "zero",
]
