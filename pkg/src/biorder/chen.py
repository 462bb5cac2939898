"""Numerical holonomy of loops via iterated integrals.

A free-group word is realized as a concrete loop: one unit-time segment per
letter, and for each generator index i a 1-form whose pullback to an x_i
segment is a fixed smooth bump of unit mass (negative letters traverse the
bump with opposite sign).  Iterated integrals of these forms, indexed by
monomials, assemble into a truncated series-valued holonomy that is
multiplicative under loop concatenation and sends the x_i loop to exp(X_i).

Everything in here is floating point, but every integrand is piecewise
polynomial, so a modest Gauss-Legendre collocation cascade computes the
integrals to near machine precision.  Each value carries an error estimate
(disagreement of two node counts plus a rounding floor) and the comparison
routine refuses to decide anything within its noise band.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .freegroup import FreeWord
from .series import Verdict, deglex_key

MAX_HOLONOMY_TRUNC = 4  # the word count per degree grows as rank**degree
DEFAULT_NODE_COUNTS = (26, 34, 46)
DEFAULT_TOL = 1e-9
DEFAULT_MARGIN = 1e-6


class QuadratureError(RuntimeError):
    """The node-count ladder never brought the two-resolution disagreement
    under the requested tolerance."""


def bump_density(u: float | np.ndarray) -> float | np.ndarray:
    """The segment profile 30 u^2 (1-u)^2: smooth at the ends, unit mass."""
    return 30.0 * u * u * (1.0 - u) * (1.0 - u)


@dataclass(frozen=True)
class LoopModel:
    """A loop built from one segment per free-group letter.

    Segments are signed generator indices, exactly like FreeWord letters,
    but the sequence is *not* freely reduced: a loop that walks x1 and then
    back along x1^-1 is a genuine (nullhomotopic) loop, and its holonomy
    cancelling to 1 is a theorem about the integrals, not bookkeeping.
    """

    rank: int
    segments: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        for l in self.segments:
            if l == 0 or abs(l) > self.rank:
                raise ValueError(f"segment letter {l} out of range for rank {self.rank}")

    @classmethod
    def from_word(cls, w: FreeWord) -> LoopModel:
        return cls(w.rank, w.letters)

    @classmethod
    def constant(cls, rank: int) -> LoopModel:
        return cls(rank, ())

    def concat(self, other: LoopModel) -> LoopModel:
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        return LoopModel(self.rank, self.segments + other.segments)

    def reverse(self) -> LoopModel:
        """The same loop traversed backwards."""
        return LoopModel(self.rank, tuple(-l for l in reversed(self.segments)))

    def __len__(self) -> int:
        return len(self.segments)


@functools.lru_cache(maxsize=None)
def _collocation(nodes: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes on [0,1], weights, and the antiderivative matrix.

    The matrix maps values of a polynomial at the nodes to values of its
    antiderivative (vanishing at 0) at the same nodes; it is exact for
    polynomial degree < nodes.
    """
    t, wt = np.polynomial.legendre.leggauss(nodes)
    x = (t + 1.0) / 2.0
    weights = wt / 2.0
    vander = np.polynomial.legendre.legvander(t, nodes)  # columns P_0..P_nodes
    v = vander[:, :nodes]
    anti = np.empty_like(v)
    anti[:, 0] = x
    for q in range(1, nodes):
        anti[:, q] = (vander[:, q + 1] - vander[:, q - 1]) / (2.0 * (2 * q + 1))
    matrix = np.linalg.solve(v.T, anti.T).T
    return x, weights, matrix


@functools.lru_cache(maxsize=None)
def _bump_at_nodes(nodes: int) -> np.ndarray:
    x, _, _ = _collocation(nodes)
    return np.asarray(bump_density(x))


def _cascade(segments: tuple[int, ...], indices: tuple[int, ...], nodes: int) -> float:
    """One pass of the nested-antiderivative recursion at a fixed node count."""
    _, weights, matrix = _collocation(nodes)
    bump = _bump_at_nodes(nodes)
    level = [np.ones(nodes) for _ in segments]
    carry = 0.0
    for target in indices:
        carry = 0.0
        nxt: list[np.ndarray] = []
        for letter, prev in zip(segments, level):
            if abs(letter) == target:
                sign = 1.0 if letter > 0 else -1.0
                local = sign * bump * prev
                nxt.append(carry + matrix @ local)
                carry = carry + sign * float(weights @ (bump * prev))
            else:
                nxt.append(np.full(nodes, carry))
        level = nxt
    return carry


def iterated_integral(
    loop: LoopModel,
    indices: tuple[int, ...],
    *,
    node_counts: tuple[int, ...] = DEFAULT_NODE_COUNTS,
    tol: float = DEFAULT_TOL,
) -> tuple[float, float]:
    """Value and error estimate of one iterated integral along the loop.

    ``indices`` names the monomial X_{i1}..X_{ik}; the empty tuple gives the
    constant term 1.  The error estimate is the disagreement between two
    consecutive node counts plus a rounding floor; if the ladder in
    ``node_counts`` never gets the disagreement under ``tol``, raises
    QuadratureError rather than returning a number it cannot stand behind.
    """
    for i in indices:
        if not 1 <= i <= loop.rank:
            raise ValueError(f"index {i} out of range for rank {loop.rank}")
    if len(node_counts) < 2:
        raise ValueError("need at least two node counts for an error estimate")
    if not indices:
        return 1.0, 0.0
    if not loop.segments:
        return 0.0, 0.0
    floor = 1e-15 * (len(loop.segments) + len(indices))
    value = _cascade(loop.segments, indices, node_counts[0])
    for nodes in node_counts[1:]:
        refined = _cascade(loop.segments, indices, nodes)
        estimate = abs(refined - value) + floor * (1.0 + abs(refined))
        if estimate <= tol:
            return refined, estimate
        value = refined
    raise QuadratureError(
        f"integral for {indices} over {len(loop.segments)} segments did not "
        f"stabilize below {tol} on node counts {node_counts}"
    )


@dataclass(frozen=True)
class HolonomySeries:
    """A truncated holonomy: float coefficient and error bound per monomial."""

    rank: int
    trunc: int
    values: dict[tuple[int, ...], float]
    errors: dict[tuple[int, ...], float]

    def coefficient(self, indices: tuple[int, ...]) -> float:
        return self.values.get(tuple(indices), 0.0)

    def error(self, indices: tuple[int, ...]) -> float:
        return self.errors.get(tuple(indices), 0.0)

    def __mul__(self, other: HolonomySeries) -> HolonomySeries:
        """Truncated product with first-order error propagation."""
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        trunc = min(self.trunc, other.trunc)
        values: dict[tuple[int, ...], float] = {}
        errors: dict[tuple[int, ...], float] = {}
        for key_a, va in self.values.items():
            ea = self.errors.get(key_a, 0.0)
            for key_b, vb in other.values.items():
                if len(key_a) + len(key_b) > trunc:
                    continue
                eb = other.errors.get(key_b, 0.0)
                key = key_a + key_b
                values[key] = values.get(key, 0.0) + va * vb
                errors[key] = (
                    errors.get(key, 0.0) + abs(va) * eb + ea * abs(vb) + ea * eb
                )
        return HolonomySeries(self.rank, trunc, values, errors)


def _all_keys(rank: int, trunc: int) -> list[tuple[int, ...]]:
    keys: list[tuple[int, ...]] = [()]
    for degree in range(1, trunc + 1):
        keys.extend(itertools.product(range(1, rank + 1), repeat=degree))
    return keys


def holonomy_series(
    loop: LoopModel,
    trunc: int = MAX_HOLONOMY_TRUNC,
    *,
    allow_deep: bool = False,
    node_counts: tuple[int, ...] = DEFAULT_NODE_COUNTS,
    tol: float = DEFAULT_TOL,
) -> HolonomySeries:
    """All iterated integrals of the loop through the given degree."""
    if trunc < 0:
        raise ValueError(f"trunc must be >= 0, got {trunc}")
    if trunc > MAX_HOLONOMY_TRUNC and not allow_deep:
        raise ValueError(
            f"trunc {trunc} exceeds {MAX_HOLONOMY_TRUNC}; the monomial count "
            f"grows as rank**degree, pass allow_deep=True to accept the cost"
        )
    values: dict[tuple[int, ...], float] = {}
    errors: dict[tuple[int, ...], float] = {}
    for key in _all_keys(loop.rank, trunc):
        value, err = iterated_integral(loop, key, node_counts=node_counts, tol=tol)
        values[key] = value
        errors[key] = err
    return HolonomySeries(loop.rank, trunc, values, errors)


def holonomy_compare(
    a: FreeWord,
    b: FreeWord,
    *,
    trunc: int = MAX_HOLONOMY_TRUNC,
    margin: float = DEFAULT_MARGIN,
    allow_deep: bool = False,
    node_counts: tuple[int, ...] = DEFAULT_NODE_COUNTS,
    tol: float = DEFAULT_TOL,
) -> Verdict | None:
    """Order two words by the first numerically-resolved holonomy monomial.

    Scans coefficient differences in graded lexicographic order and decides
    at the first one exceeding both error estimates plus ``margin``.  Freely
    equal words compare EQUAL outright; otherwise, if every monomial through
    ``trunc`` is inside the noise band, returns None (indeterminate) instead
    of guessing.
    """
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} vs {b.rank}")
    if a.letters == b.letters:
        return Verdict.EQUAL
    sa = holonomy_series(
        LoopModel.from_word(a), trunc,
        allow_deep=allow_deep, node_counts=node_counts, tol=tol,
    )
    sb = holonomy_series(
        LoopModel.from_word(b), trunc,
        allow_deep=allow_deep, node_counts=node_counts, tol=tol,
    )
    for key in sorted(_all_keys(a.rank, trunc), key=deglex_key):
        if not key:
            continue
        diff = sa.coefficient(key) - sb.coefficient(key)
        noise = sa.error(key) + sb.error(key) + margin
        if abs(diff) > noise:
            return Verdict.LESS if diff < 0 else Verdict.GREATER
    return None
