"""Validated finite ultrametric spaces and their intrinsic geometry.

A space is a list of labelled points with a symmetric, exact-rational
distance matrix satisfying the strong triangle inequality
d(x,z) <= max(d(x,y), d(y,z)). Spaces are immutable once validated and all
operations here are pure, so instances can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .exact import ExactValue, ZERO, Coercible
from .errors import (
    AsymmetricMatrixError,
    EmptySubsetError,
    IndexOutOfRangeError,
    NonzeroDiagonalError,
    SpaceValidationError,
    UltrametricViolationError,
    ZeroOffDiagonalError,
)


class UltrametricSpace:
    """A finite ultrametric space. Construct through validate_space."""

    __slots__ = ("labels", "_rows", "inexact", "_diameter")

    def __init__(self, labels, rows, inexact, _token=None):
        if _token is not _CONSTRUCTION_TOKEN:
            raise TypeError("use validate_space() to build an UltrametricSpace")
        self.labels: tuple[str, ...] = labels
        self._rows: tuple[tuple[ExactValue, ...], ...] = rows
        self.inexact: bool = inexact
        self._diameter: Optional[ExactValue] = None

    @classmethod
    def _from_validated(cls, labels, rows, inexact) -> "UltrametricSpace":
        return cls(tuple(labels), tuple(tuple(r) for r in rows), bool(inexact), _token=_CONSTRUCTION_TOKEN)

    def __len__(self) -> int:
        return len(self.labels)

    def dist(self, i: int, j: int) -> ExactValue:
        return self._rows[i][j]

    def row(self, i: int) -> tuple[ExactValue, ...]:
        return self._rows[i]

    def matrix(self) -> tuple[tuple[ExactValue, ...], ...]:
        return self._rows

    def diameter(self) -> ExactValue:
        if self._diameter is None:
            best = ZERO
            for i in range(len(self)):
                for j in range(i + 1, len(self)):
                    if self._rows[i][j] > best:
                        best = self._rows[i][j]
            self._diameter = best
        return self._diameter

    def distance_values(self) -> tuple[ExactValue, ...]:
        """Sorted distinct nonzero distances of the whole space."""
        return weight_spectrum(self).values

    def check_index(self, i: int) -> None:
        if not 0 <= i < len(self):
            raise IndexOutOfRangeError(f"point index {i} out of range for {len(self)} points")

    def __eq__(self, other) -> bool:
        if not isinstance(other, UltrametricSpace):
            return NotImplemented
        return (
            self.labels == other.labels
            and self._rows == other._rows
            and self.inexact == other.inexact
        )

    def __hash__(self) -> int:
        return hash((self.labels, self._rows, self.inexact))

    def __repr__(self) -> str:
        flag = ", inexact" if self.inexact else ""
        return f"UltrametricSpace({len(self)} points{flag})"


_CONSTRUCTION_TOKEN = object()


@dataclass(frozen=True)
class WeightSpectrum:
    """The set of distinct nonzero distances among points of a subset.

    values is strictly increasing; min_value/max_value are None when empty.
    """

    values: tuple[ExactValue, ...]

    @property
    def min_value(self) -> Optional[ExactValue]:
        return self.values[0] if self.values else None

    @property
    def max_value(self) -> Optional[ExactValue]:
        return self.values[-1] if self.values else None

    def at_least(self, eps: ExactValue) -> "WeightSpectrum":
        """Elements >= eps (inclusive filter)."""
        return WeightSpectrum(tuple(v for v in self.values if v >= eps))

    def as_set(self) -> frozenset[ExactValue]:
        return frozenset(self.values)

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, value: ExactValue) -> bool:
        return value in self.values

    def __str__(self) -> str:
        return " ".join(str(v) for v in self.values)


def validate_space(
    matrix: Sequence[Sequence[Coercible]],
    labels: Optional[Sequence[str]] = None,
    *,
    inexact: bool = False,
) -> UltrametricSpace:
    """Validate a square distance matrix and return the immutable space.

    Checks run in a fixed order and report the lexicographically first
    violating pair or triple: diagonal/symmetry/positivity over index pairs,
    then the strong triangle inequality over all ordered triples of distinct
    indices.
    """
    n = len(matrix)
    if n == 0:
        raise SpaceValidationError("a space needs at least one point")
    rows = []
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise SpaceValidationError(f"row {i} has length {len(row)}, expected {n}")
        rows.append(tuple(ExactValue.coerce(v) for v in row))

    if labels is None:
        labels = tuple(str(i) for i in range(n))
    else:
        labels = tuple(str(l) for l in labels)
        if len(labels) != n:
            raise SpaceValidationError(f"{len(labels)} labels for {n} points")
        if len(set(labels)) != n:
            raise SpaceValidationError("labels must be distinct")

    for i in range(n):
        for j in range(i, n):
            if i == j:
                if rows[i][i] != ZERO:
                    raise NonzeroDiagonalError(i, rows[i][i])
            else:
                if rows[i][j] != rows[j][i]:
                    raise AsymmetricMatrixError(i, j, rows[i][j], rows[j][i])
                if rows[i][j] == ZERO:
                    raise ZeroOffDiagonalError(i, j)

    # Rank the distinct values once so the O(n^3) triple scan compares ints.
    distinct = sorted({v for row in rows for v in row})
    rank = {v: k for k, v in enumerate(distinct)}
    rk = [[rank[v] for v in row] for row in rows]
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            rij = rk[i][j]
            rowj = rk[j]
            rowi = rk[i]
            for k in range(n):
                if k == i or k == j:
                    continue
                rjk = rowj[k]
                bound = rij if rij >= rjk else rjk
                if rowi[k] > bound:
                    raise UltrametricViolationError(
                        i, j, k, rows[i][j], rows[j][k], rows[i][k]
                    )

    return UltrametricSpace._from_validated(labels, rows, inexact)


def diameter(space: UltrametricSpace) -> ExactValue:
    """Largest pairwise distance; zero for a singleton."""
    return space.diameter()


def _normalize_subset(space: UltrametricSpace, subset: Iterable[int]) -> tuple[int, ...]:
    pts = sorted(set(subset))
    if not pts:
        raise EmptySubsetError("subset must be nonempty")
    for i in pts:
        space.check_index(i)
    return tuple(pts)


def induced_subspace(space: UltrametricSpace, subset: Iterable[int]) -> UltrametricSpace:
    """Restriction of the space to a subset of points; validity is inherited."""
    pts = _normalize_subset(space, subset)
    labels = tuple(space.labels[i] for i in pts)
    rows = tuple(tuple(space.dist(i, j) for j in pts) for i in pts)
    return UltrametricSpace._from_validated(labels, rows, space.inexact)


def point_set_distance(space: UltrametricSpace, i: int, subset: Sequence[int]) -> ExactValue:
    """dist(x, A) = min over a in A of d(x, a)."""
    best = space.dist(i, subset[0])
    for j in subset[1:]:
        d = space.dist(i, j)
        if d < best:
            best = d
    return best


def hausdorff_distance(
    space: UltrametricSpace, a: Iterable[int], b: Iterable[int]
) -> ExactValue:
    """Hausdorff distance between two subsets of one space.

    max( sup_{x in A} dist(x, B), sup_{y in B} dist(y, A) ); exact because
    the sets are finite.
    """
    pa = _normalize_subset(space, a)
    pb = _normalize_subset(space, b)
    best = ZERO
    for i in pa:
        d = point_set_distance(space, i, pb)
        if d > best:
            best = d
    for j in pb:
        d = point_set_distance(space, j, pa)
        if d > best:
            best = d
    return best


def is_epsilon_net(space: UltrametricSpace, s: Iterable[int], eps: ExactValue) -> bool:
    """True iff every point is at distance strictly less than eps from s."""
    if eps <= ZERO:
        raise ValueError("eps must be positive")
    pts = _normalize_subset(space, s)
    for i in range(len(space)):
        if point_set_distance(space, i, pts) >= eps:
            return False
    return True


def ball_partition(space: UltrametricSpace, eps: ExactValue) -> tuple[tuple[int, ...], ...]:
    """Partition into open balls of radius eps.

    In an ultrametric space the open balls {d(x, .) < eps} either coincide or
    are disjoint, so membership can be tested against a single representative.
    Classes are listed by ascending representative, points ascending inside.
    """
    if eps <= ZERO:
        raise ValueError("eps must be positive")
    reps: list[int] = []
    classes: list[list[int]] = []
    for i in range(len(space)):
        for ci, r in enumerate(reps):
            if space.dist(r, i) < eps:
                classes[ci].append(i)
                break
        else:
            reps.append(i)
            classes.append([i])
    return tuple(tuple(c) for c in classes)


def ball_representatives(space: UltrametricSpace, eps: ExactValue) -> tuple[int, ...]:
    """Smallest-index representative of each open eps-ball; a minimal eps-net."""
    return tuple(c[0] for c in ball_partition(space, eps))


def weight_spectrum(
    space: UltrametricSpace, subset: Optional[Iterable[int]] = None
) -> WeightSpectrum:
    """Distinct nonzero distances among points of the subset (default: all)."""
    pts = (
        tuple(range(len(space)))
        if subset is None
        else _normalize_subset(space, subset)
    )
    values = set()
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            values.add(space.dist(pts[a], pts[b]))
    return WeightSpectrum(tuple(sorted(values)))


def spectrum_at_least(spectrum: WeightSpectrum, eps: ExactValue) -> WeightSpectrum:
    """W ∩ [eps, ∞), the inclusive filter used by the spectra lower bound."""
    if eps <= ZERO:
        raise ValueError("eps must be positive")
    return spectrum.at_least(eps)


def spectra_disagreement_bound(x: UltrametricSpace, y: UltrametricSpace) -> ExactValue:
    """Largest distance value the two whole-space spectra disagree on.

    Zero when the spectra are identical. Filtering both spectra at any
    threshold strictly above this value makes them equal as sets, and at the
    value itself (when positive) they still differ, so it is exactly
    inf { eps > 0 : W_X(X)_{>=eps} = W_Y(Y)_{>=eps} }.
    """
    sx = weight_spectrum(x).as_set()
    sy = weight_spectrum(y).as_set()
    disagreement = sx.symmetric_difference(sy)
    if not disagreement:
        return ZERO
    return max(disagreement)


def candidate_thresholds(x: UltrametricSpace, y: UltrametricSpace) -> tuple[ExactValue, ...]:
    """Breakpoint grid for threshold scans over epsilon.

    Contains 0, both whole-space spectra, all absolute differences of
    spectrum values (with 0 adjoined on both sides), and a sentinel strictly
    above both diameters. Every scan predicate used by the engine is
    piecewise constant between consecutive entries.
    """
    wx = weight_spectrum(x).values
    wy = weight_spectrum(y).values
    out = {ZERO}
    out.update(wx)
    out.update(wy)
    for a in (ZERO, *wx):
        for b in (ZERO, *wy):
            out.add(a.abs_diff(b))
    sentinel = max(x.diameter(), y.diameter()) + ExactValue(1)
    out.add(sentinel)
    return tuple(sorted(out))
