"""Truncated non-commutative power series over the rationals.

Series live in the free associative algebra on generators X_1..X_n,
truncated at a fixed total degree N.  Coefficients are exact (Python ints
or Fractions), so every ordering verdict derived from them is
unconditional rather than a floating-point judgement.

Monomials are compared in DegLex order: lower total degree first, and
within a degree the monomial whose index sequence is lexicographically
bigger is the bigger monomial (so X1X2 < X2X1 and X1 < X2).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

Coeff = int | Fraction

_COEFF_TYPES = (int, Fraction)


class Verdict(enum.Enum):
    """Three-valued outcome of an ordering comparison."""

    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"

    def flipped(self) -> Verdict:
        """The verdict with the roles of the two arguments swapped."""
        if self is Verdict.LESS:
            return Verdict.GREATER
        if self is Verdict.GREATER:
            return Verdict.LESS
        return self


def deglex_key(indices: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sort key realizing DegLex on raw index tuples."""
    return (len(indices), indices)


@dataclass(frozen=True)
class Monomial:
    """A word X_{i1}..X_{ik} in the generators; the empty word is the unit."""

    rank: int  # number of generators n >= 1
    indices: tuple[int, ...]  # each in 1..rank; () is the constant monomial

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        for i in self.indices:
            if not 1 <= i <= self.rank:
                raise ValueError(f"index {i} out of range 1..{self.rank}")

    @property
    def degree(self) -> int:
        return len(self.indices)

    def deglex_key(self) -> tuple[int, tuple[int, ...]]:
        return deglex_key(self.indices)

    def __mul__(self, other: Monomial) -> Monomial:
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        return Monomial(self.rank, self.indices + other.indices)

    def __str__(self) -> str:
        if not self.indices:
            return "1"
        return "".join(f"X{i}" for i in self.indices)


def deglex_compare(a: Monomial, b: Monomial) -> Verdict:
    """Compare two monomials of the same rank in DegLex order.

    Lower degree is smaller; within equal degree the lexicographically
    smaller index sequence gives the smaller monomial, e.g. X1X2 < X2X1.
    """
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} vs {b.rank}")
    ka, kb = a.deglex_key(), b.deglex_key()
    if ka < kb:
        return Verdict.LESS
    if ka > kb:
        return Verdict.GREATER
    return Verdict.EQUAL


def _validate_coeff(c: object) -> Coeff:
    if not isinstance(c, _COEFF_TYPES):
        raise TypeError(f"coefficient must be int or Fraction, got {type(c).__name__}")
    return c


@dataclass(frozen=True)
class TruncSeries:
    """Sparse truncated series: index tuples mapped to nonzero coefficients.

    The truncation order is part of the value; all arithmetic stays inside
    degree <= trunc and mixing different ranks or truncations is an error.
    Instances are treated as immutable: never mutate ``terms`` in place.
    """

    rank: int  # generators X_1..X_rank
    trunc: int  # truncation order N >= 0
    terms: dict[tuple[int, ...], Coeff]  # canonical: no zeros, degree <= N

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        if self.trunc < 0:
            raise ValueError(f"truncation must be >= 0, got {self.trunc}")
        for key, coeff in self.terms.items():
            if len(key) > self.trunc:
                raise ValueError(f"monomial {key} exceeds truncation {self.trunc}")
            if any(not 1 <= i <= self.rank for i in key):
                raise ValueError(f"monomial {key} out of range for rank {self.rank}")
            if coeff == 0:
                raise ValueError(f"stored zero coefficient at {key}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, rank: int, trunc: int) -> TruncSeries:
        return cls(rank, trunc, {})

    @classmethod
    def unit(cls, rank: int, trunc: int) -> TruncSeries:
        return cls(rank, trunc, {(): 1})

    @classmethod
    def generator(cls, rank: int, trunc: int, i: int) -> TruncSeries:
        """The series X_i (requires trunc >= 1)."""
        if not 1 <= i <= rank:
            raise ValueError(f"generator index {i} out of range 1..{rank}")
        if trunc < 1:
            raise ValueError("trunc must be >= 1 to hold a generator")
        return cls(rank, trunc, {(i,): 1})

    @classmethod
    def from_terms(
        cls,
        rank: int,
        trunc: int,
        terms: Iterable[tuple[tuple[int, ...], Coeff]] | dict[tuple[int, ...], Coeff],
    ) -> TruncSeries:
        """Build a series, dropping zero coefficients and degrees > trunc."""
        items = terms.items() if isinstance(terms, dict) else terms
        out: dict[tuple[int, ...], Coeff] = {}
        for key, coeff in items:
            key = tuple(key)
            _validate_coeff(coeff)
            if len(key) > trunc:
                continue
            acc = out.get(key, 0) + coeff
            if acc:
                out[key] = acc
            elif key in out:
                del out[key]
        return cls(rank, trunc, out)

    # -- inspection --------------------------------------------------------

    def coefficient(self, indices: tuple[int, ...] | Monomial) -> Coeff:
        if isinstance(indices, Monomial):
            indices = indices.indices
        return self.terms.get(tuple(indices), 0)

    def monomials(self) -> Iterator[Monomial]:
        """Monomials with nonzero coefficient, in DegLex order."""
        for key in sorted(self.terms, key=deglex_key):
            yield Monomial(self.rank, key)

    def degree_part(self, d: int) -> dict[tuple[int, ...], Coeff]:
        """The degree-d slice as a plain dict (may be empty)."""
        return {k: v for k, v in self.terms.items() if len(k) == d}

    def lowest_degree(self) -> int | None:
        """Smallest degree >= 1 carrying a nonzero term, or None."""
        degs = [len(k) for k in self.terms if k]
        return min(degs) if degs else None

    def truncate(self, new_trunc: int) -> TruncSeries:
        """Forget all terms of degree > new_trunc (new_trunc <= trunc)."""
        if new_trunc > self.trunc:
            raise ValueError(f"cannot extend truncation {self.trunc} to {new_trunc}")
        return TruncSeries(
            self.rank, new_trunc, {k: v for k, v in self.terms.items() if len(k) <= new_trunc}
        )

    def _check_compatible(self, other: TruncSeries) -> None:
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        if self.trunc != other.trunc:
            raise ValueError(f"truncation mismatch: {self.trunc} vs {other.trunc}")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: TruncSeries) -> TruncSeries:
        self._check_compatible(other)
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            acc = out.get(key, 0) + coeff
            if acc:
                out[key] = acc
            elif key in out:
                del out[key]
        return TruncSeries(self.rank, self.trunc, out)

    def __neg__(self) -> TruncSeries:
        return TruncSeries(self.rank, self.trunc, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: TruncSeries) -> TruncSeries:
        return self + (-other)

    def scale(self, c: Coeff) -> TruncSeries:
        _validate_coeff(c)
        if c == 0:
            return TruncSeries.zero(self.rank, self.trunc)
        return TruncSeries(self.rank, self.trunc, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: TruncSeries | Coeff) -> TruncSeries:
        if isinstance(other, _COEFF_TYPES):
            return self.scale(other)
        self._check_compatible(other)
        limit = self.trunc
        out: dict[tuple[int, ...], Coeff] = {}
        for ka, va in self.terms.items():
            da = len(ka)
            for kb, vb in other.terms.items():
                if da + len(kb) > limit:
                    continue
                key = ka + kb
                acc = out.get(key, 0) + va * vb
                if acc:
                    out[key] = acc
                elif key in out:
                    del out[key]
        return TruncSeries(self.rank, self.trunc, out)

    def __rmul__(self, other: Coeff) -> TruncSeries:
        if isinstance(other, _COEFF_TYPES):
            return self.scale(other)
        return NotImplemented

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for key in sorted(self.terms, key=deglex_key):
            coeff = self.terms[key]
            mono = str(Monomial(self.rank, key))
            if key == ():
                body = str(coeff)
            elif coeff == 1:
                body = mono
            elif coeff == -1:
                body = f"-{mono}"
            else:
                body = f"{coeff} {mono}"
            if parts and not body.startswith("-"):
                parts.append(f"+ {body}")
            elif parts:
                parts.append(f"- {body[1:]}")
            else:
                parts.append(body)
        return " ".join(parts)


def inverse(s: TruncSeries) -> TruncSeries:
    """Multiplicative inverse of a series with constant term 1.

    Computed as the truncated geometric series sum_k (1 - s)^k; both
    s * inverse(s) and inverse(s) * s equal 1 up to the truncation.
    """
    if s.coefficient(()) != 1:
        raise ValueError("inverse requires constant term exactly 1")
    one = TruncSeries.unit(s.rank, s.trunc)
    u = one - s  # lowest degree >= 1
    result = one
    for _ in range(s.trunc):
        result = one + u * result
    return result


def exp(s: TruncSeries) -> TruncSeries:
    """Truncated exponential of a series with zero constant term."""
    if s.coefficient(()) != 0:
        raise ValueError("exp requires zero constant term")
    one = TruncSeries.unit(s.rank, s.trunc)
    result = one
    for k in range(s.trunc, 0, -1):
        result = one + (s * result).scale(Fraction(1, k))
    return result


def log(s: TruncSeries) -> TruncSeries:
    """Truncated logarithm of a series with constant term 1."""
    if s.coefficient(()) != 1:
        raise ValueError("log requires constant term exactly 1")
    u = s - TruncSeries.unit(s.rank, s.trunc)
    if s.trunc == 0:
        return TruncSeries.zero(s.rank, s.trunc)
    # log(1+u) = u * sum_{j>=0} (-1)^j u^j / (j+1), evaluated by Horner
    unit = TruncSeries.unit(s.rank, s.trunc)
    result = unit.scale(Fraction((-1) ** (s.trunc + 1), s.trunc))
    for k in range(s.trunc - 1, 0, -1):
        result = unit.scale(Fraction((-1) ** (k + 1), k)) + u * result
    return u * result


def series_compare_witness(
    a: TruncSeries, b: TruncSeries
) -> tuple[Verdict, tuple[int, ...] | None, Coeff, Coeff]:
    """Scan monomials in DegLex order; report the first differing one.

    Returns (verdict, monomial, coeff_a, coeff_b); the monomial is None
    when every coefficient up to the shared truncation agrees.
    """
    a._check_compatible(b)
    for key in sorted(set(a.terms) | set(b.terms), key=deglex_key):
        ca = a.terms.get(key, 0)
        cb = b.terms.get(key, 0)
        if ca != cb:
            verdict = Verdict.LESS if ca < cb else Verdict.GREATER
            return verdict, key, ca, cb
    return Verdict.EQUAL, None, 0, 0


def series_compare(a: TruncSeries, b: TruncSeries, *, exact: bool = True) -> Verdict | None:
    """Compare two series in the DegLex-lexicographic order.

    The first monomial (in DegLex order) whose coefficients differ decides.
    If all coefficients agree through the truncation, the answer is Equal
    only when the caller asserts the series are exact (``exact=True``);
    for truncations of possibly-longer expansions the comparison is
    undetermined and None is returned.
    """
    verdict, _, _, _ = series_compare_witness(a, b)
    if verdict is not Verdict.EQUAL:
        return verdict
    return Verdict.EQUAL if exact else None


# -- serialization ---------------------------------------------------------


def to_json_obj(s: TruncSeries) -> dict:
    """JSON-ready form: DegLex-sorted [indices, numerator, denominator] rows."""
    rows = []
    for key in sorted(s.terms, key=deglex_key):
        coeff = s.terms[key]
        rows.append([list(key), coeff.numerator, coeff.denominator])
    return {"rank": s.rank, "trunc": s.trunc, "terms": rows}


def from_json_obj(obj: dict) -> TruncSeries:
    """Inverse of to_json_obj; round-trips exactly."""
    try:
        rank = int(obj["rank"])
        trunc = int(obj["trunc"])
        rows = obj["terms"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed series object: {exc}") from exc
    terms: dict[tuple[int, ...], Coeff] = {}
    for row in rows:
        indices, num, den = row
        coeff = Fraction(num, den)
        if coeff.denominator == 1:
            coeff = coeff.numerator
        terms[tuple(int(i) for i in indices)] = coeff
    return TruncSeries(rank, trunc, terms)
