"""Correspondences between two ultrametric spaces.

A correspondence is a relation covering both point sets; its distortion is
the largest mismatch |d_X - d_Y| over related pairs. A correspondence is
strong when every non-related pair (x, y) sees equal partner distances on
both sides, strictly exceeding the distortion. The minimum distortion over
strong correspondences is the non-Archimedean Gromov-Hausdorff distance,
while half the minimum over plain correspondences is the classical one; both
minima are computed here exactly by branch-and-bound over pair sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact import ExactValue, ZERO
from .errors import (
    BridgeTooSmallError,
    IndexOutOfRangeError,
    NotACorrespondenceError,
    NotStrongError,
    NotSurjectiveError,
    SearchSpaceTooLargeError,
    WellDefinednessViolationError,
)
from .spaces import (
    UltrametricSpace,
    hausdorff_distance,
    spectra_disagreement_bound,
    validate_space,
)

DEFAULT_PRODUCT_CAP = 36


def is_correspondence(
    x: UltrametricSpace, y: UltrametricSpace, pairs: Sequence[tuple[int, int]]
) -> bool:
    """True iff the pair set covers every point of both spaces."""
    left_covered = set()
    right_covered = set()
    for i, j in pairs:
        x.check_index(i)
        y.check_index(j)
        left_covered.add(i)
        right_covered.add(j)
    return len(left_covered) == len(x) and len(right_covered) == len(y)


@dataclass(frozen=True)
class Correspondence:
    """A both-side covering relation between the point sets of two spaces."""

    left: UltrametricSpace
    right: UltrametricSpace
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted(set(self.pairs)))
        object.__setattr__(self, "pairs", pairs)
        if not is_correspondence(self.left, self.right, pairs):
            raise NotACorrespondenceError(
                "pairs do not cover both point sets"
            )

    def pair_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.pairs)

    def right_partners(self) -> list[list[int]]:
        """For each left index, the sorted list of related right indices."""
        out: list[list[int]] = [[] for _ in range(len(self.left))]
        for i, j in self.pairs:
            out[i].append(j)
        return out

    def left_partners(self) -> list[list[int]]:
        """For each right index, the sorted list of related left indices."""
        out: list[list[int]] = [[] for _ in range(len(self.right))]
        for i, j in self.pairs:
            out[j].append(i)
        return out

    def complement(self) -> tuple[tuple[int, int], ...]:
        """Pairs of X x Y outside the relation, in lexicographic order."""
        members = self.pair_set()
        return tuple(
            (i, j)
            for i in range(len(self.left))
            for j in range(len(self.right))
            if (i, j) not in members
        )


def full_product(x: UltrametricSpace, y: UltrametricSpace) -> Correspondence:
    pairs = tuple((i, j) for i in range(len(x)) for j in range(len(y)))
    return Correspondence(x, y, pairs)


def distortion(c: Correspondence) -> ExactValue:
    """max |d_X(x,x') - d_Y(y,y')| over related pairs (x,y), (x',y')."""
    best = ZERO
    pairs = c.pairs
    for a in range(len(pairs)):
        i, j = pairs[a]
        for b in range(a + 1, len(pairs)):
            k, l = pairs[b]
            d = c.left.dist(i, k).abs_diff(c.right.dist(j, l))
            if d > best:
                best = d
    return best


def associated_correspondence(
    x: UltrametricSpace, y: UltrametricSpace, f: Sequence[int]
) -> Correspondence:
    """Graph of a surjective map f: X -> Y as a correspondence."""
    if len(f) != len(x):
        raise IndexOutOfRangeError(
            f"map has {len(f)} entries for {len(x)} points"
        )
    for j in f:
        y.check_index(j)
    if len(set(f)) != len(y):
        raise NotSurjectiveError("map does not cover the right space")
    return Correspondence(x, y, tuple((i, f[i]) for i in range(len(x))))


@dataclass(frozen=True)
class StrongnessCounterexample:
    """Replayable refutation of the strongness condition.

    The pair (x, y) lies outside the correspondence, (x_prime, y) and
    (x, y_prime) lie inside it, yet left_distance = d_X(x, x_prime) and
    right_distance = d_Y(y, y_prime) are unequal or fail to exceed the
    distortion.
    """

    x: int
    y: int
    x_prime: int
    y_prime: int
    left_distance: ExactValue
    right_distance: ExactValue
    reason: str  # "unequal" or "not_above_distortion"


@dataclass(frozen=True)
class StrongnessVerdict:
    is_strong: bool
    distortion: ExactValue
    counterexample: Optional[StrongnessCounterexample]


def is_strong_correspondence(c: Correspondence) -> StrongnessVerdict:
    """Decide strongness by the universal partner condition.

    For every (x, y) outside the relation and all partners (x, y'), (x', y)
    inside it, d_X(x, x') and d_Y(y, y') must coincide and strictly exceed
    the distortion. The check is exhaustive over the complement.
    """
    dis = distortion(c)
    right_of = c.right_partners()
    left_of = c.left_partners()
    members = c.pair_set()
    for x in range(len(c.left)):
        for y in range(len(c.right)):
            if (x, y) in members:
                continue
            for x_prime in left_of[y]:
                dx = c.left.dist(x, x_prime)
                for y_prime in right_of[x]:
                    dy = c.right.dist(y, y_prime)
                    if dx != dy:
                        return StrongnessVerdict(
                            False,
                            dis,
                            StrongnessCounterexample(
                                x, y, x_prime, y_prime, dx, dy, "unequal"
                            ),
                        )
                    if dx <= dis:
                        return StrongnessVerdict(
                            False,
                            dis,
                            StrongnessCounterexample(
                                x, y, x_prime, y_prime, dx, dy,
                                "not_above_distortion",
                            ),
                        )
    return StrongnessVerdict(True, dis, None)


@dataclass
class EquilibriumTable:
    """Equilibrium value for each pair outside a strong correspondence.

    entries maps (x, y) in the complement to the common partner distance.
    inf_value/sup_value are the observed extrema (None for an empty
    complement); distortion and min_diameter bracket every entry.
    """

    entries: dict[tuple[int, int], ExactValue]
    inf_value: Optional[ExactValue]
    sup_value: Optional[ExactValue]
    distortion: ExactValue
    min_diameter: ExactValue


def equilibrium_table(c: Correspondence) -> EquilibriumTable:
    verdict = is_strong_correspondence(c)
    if not verdict.is_strong:
        raise NotStrongError(
            f"correspondence is not strong: {verdict.counterexample}"
        )
    right_of = c.right_partners()
    left_of = c.left_partners()
    members = c.pair_set()
    entries: dict[tuple[int, int], ExactValue] = {}
    for x in range(len(c.left)):
        for y in range(len(c.right)):
            if (x, y) in members:
                continue
            candidates = {c.right.dist(y, y_prime) for y_prime in right_of[x]}
            candidates.update(c.left.dist(x, x_prime) for x_prime in left_of[y])
            if len(candidates) != 1:
                raise WellDefinednessViolationError(
                    f"equilibrium value at ({x}, {y}) is not unique: "
                    f"{sorted(candidates)}"
                )
            entries[(x, y)] = next(iter(candidates))
    values = sorted(entries.values())
    return EquilibriumTable(
        entries=entries,
        inf_value=values[0] if values else None,
        sup_value=values[-1] if values else None,
        distortion=verdict.distortion,
        min_diameter=min(c.left.diameter(), c.right.diameter()),
    )


@dataclass
class GlueResult:
    """Both spaces embedded isometrically in one ultrametric space."""

    glued_space: UltrametricSpace
    left_embedding: tuple[int, ...]
    right_embedding: tuple[int, ...]
    r0: ExactValue
    quotient_applied: bool


def glue_along_strong_correspondence(c: Correspondence) -> GlueResult:
    """Realize a strong correspondence as a bridge metric on X ⊔ Y.

    Related pairs sit at distance r0 = dis C; unrelated cross pairs sit at
    their equilibrium value. With r0 = 0 the semi-metric is quotiented,
    merging each matched pair, which exhibits an isometry X ≅ Y.
    """
    verdict = is_strong_correspondence(c)
    if not verdict.is_strong:
        raise NotStrongError(
            f"correspondence is not strong: {verdict.counterexample}"
        )
    r0 = verdict.distortion
    x, y = c.left, c.right
    n, m = len(x), len(y)
    members = c.pair_set()
    left_of = c.left_partners()

    def cross(i: int, j: int) -> ExactValue:
        if (i, j) in members:
            return r0
        return x.dist(i, left_of[j][0])

    inexact = x.inexact or y.inexact
    if r0 > ZERO:
        labels = [f"L:{lbl}" for lbl in x.labels] + [f"R:{lbl}" for lbl in y.labels]
        size = n + m
        rows = [[ZERO] * size for _ in range(size)]
        for i in range(n):
            for j in range(n):
                rows[i][j] = x.dist(i, j)
        for i in range(m):
            for j in range(m):
                rows[n + i][n + j] = y.dist(i, j)
        for i in range(n):
            for j in range(m):
                d = cross(i, j)
                rows[i][n + j] = d
                rows[n + j][i] = d
        glued = validate_space(rows, labels, inexact=inexact)
        result = GlueResult(
            glued, tuple(range(n)), tuple(range(n, n + m)), r0, False
        )
    else:
        # dis = 0 forces a perfect matching: each point has a unique partner.
        parent = list(range(n + m))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i, j in c.pairs:
            ri, rj = find(i), find(n + j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
        roots = sorted({find(a) for a in range(n + m)})
        class_index = {r: k for k, r in enumerate(roots)}
        left_embed = tuple(class_index[find(i)] for i in range(n))
        right_embed = tuple(class_index[find(n + j)] for j in range(m))
        left_rep = {}
        for i in range(n):
            left_rep.setdefault(left_embed[i], i)
        labels = [f"L:{x.labels[left_rep[k]]}" for k in range(len(roots))]
        rows = [
            [x.dist(left_rep[a], left_rep[b]) for b in range(len(roots))]
            for a in range(len(roots))
        ]
        glued = validate_space(rows, labels, inexact=inexact)
        result = GlueResult(glued, left_embed, right_embed, r0, True)

    dh = hausdorff_distance(
        result.glued_space, set(result.left_embedding), set(result.right_embedding)
    )
    if dh > r0:
        raise WellDefinednessViolationError(
            f"glued Hausdorff distance {dh} exceeds r0 = {r0}"
        )
    return result


def glue_with_constant_bridge(
    x: UltrametricSpace, y: UltrametricSpace, c: ExactValue
) -> GlueResult:
    """Disjoint union with every cross distance equal to the constant c.

    Needs c >= both diameters and c > 0, otherwise some triangle through the
    bridge breaks the strong triangle inequality.
    """
    top = max(x.diameter(), y.diameter())
    if c <= ZERO or c < top:
        raise BridgeTooSmallError(
            f"bridge constant {c} is below a diameter (max diameter {top})"
        )
    n, m = len(x), len(y)
    labels = [f"L:{lbl}" for lbl in x.labels] + [f"R:{lbl}" for lbl in y.labels]
    rows = [[ZERO] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            rows[i][j] = x.dist(i, j)
    for i in range(m):
        for j in range(m):
            rows[n + i][n + j] = y.dist(i, j)
    for i in range(n):
        for j in range(m):
            rows[i][n + j] = c
            rows[n + j][i] = c
    glued = validate_space(rows, labels, inexact=x.inexact or y.inexact)
    return GlueResult(glued, tuple(range(n)), tuple(range(n, n + m)), c, False)


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a minimum-distortion search.

    optimal is False only when a node budget ran out, in which case the
    correspondence is the best incumbent and its distortion an upper bound.
    """

    correspondence: Correspondence
    distortion: ExactValue
    optimal: bool
    nodes: int


class _Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit: Optional[int]):
        self.limit = limit
        self.used = 0

    def spend(self) -> bool:
        self.used += 1
        return self.limit is not None and self.used > self.limit


class _Exhausted(Exception):
    pass


class _Done(Exception):
    pass


class _Found(Exception):
    def __init__(self, sets: list[tuple[int, ...]]):
        self.sets = sets


class _ValueGrid:
    """Integer ranks for both spaces' distances and all their gaps.

    Search inner loops compare ranks instead of rationals; the shared grid
    keeps cross-space equality and value-versus-gap comparisons exact.
    """

    def __init__(self, x: UltrametricSpace, y: UltrametricSpace):
        n, m = len(x), len(y)
        fx = [[x.dist(i, j).fraction for j in range(n)] for i in range(n)]
        fy = [[y.dist(a, b).fraction for b in range(m)] for a in range(m)]
        vx = {v for row in fx for v in row}
        vy = {v for row in fy for v in row}
        zero = Fraction(0)
        gaps = {abs(a - b) for a in vx | {zero} for b in vy | {zero}}
        self.values: list[Fraction] = sorted(vx | vy | gaps | {zero})
        rank = {v: k for k, v in enumerate(self.values)}
        self.rank = rank
        self.rx = [[rank[v] for v in row] for row in fx]
        self.ry = [[rank[v] for v in row] for row in fy]
        self.gap = [
            [
                [[rank[abs(fx[i][j] - fy[a][b])] for b in range(m)] for a in range(m)]
                for j in range(n)
            ]
            for i in range(n)
        ]

    def exact(self, r: int) -> ExactValue:
        return ExactValue(self.values[r])


def _subsets_last_level_order(m: int) -> list[tuple[int, ...]]:
    """Nonempty subsets ordered (0), (0,1), (0,1,2), ..., (1), (1,2), ...

    Complete pair sequences compare like Python tuples, where a strict
    prefix sorts first. At the final left point nothing follows the block
    of its pairs, so the plain prefix-first order on partner subsets visits
    leaves in ascending pair-set order.
    """
    out: list[tuple[int, ...]] = []

    def extend(prefix: tuple[int, ...], start: int) -> None:
        for a in range(start, m):
            sub = prefix + (a,)
            out.append(sub)
            extend(sub, a + 1)

    extend((), 0)
    return out


def _subsets_inner_level_order(m: int) -> list[tuple[int, ...]]:
    """Subset order for the non-final left points.

    Here a longer partner block sorts before its prefixes: the shorter
    branch continues with pairs of the next left point, and any (k, y)
    precedes every (k+1, y'). Appending a sentinel above all point indices
    to the sort key realizes exactly that comparison.
    """
    return sorted(_subsets_last_level_order(m), key=lambda sub: sub + (m,))


def _search(
    x: UltrametricSpace,
    y: UltrametricSpace,
    strong: bool,
    budget: Optional[int],
    product_cap: int,
) -> SearchResult:
    n, m = len(x), len(y)
    if budget is None and n * m > product_cap:
        raise SearchSpaceTooLargeError(
            f"|X|*|Y| = {n * m} exceeds the cap {product_cap}; pass a budget "
            "to search anyway"
        )
    if n == 1 or m == 1:
        # Covering forces the full product, the unique correspondence here.
        corr = full_product(x, y)
        return SearchResult(corr, max(x.diameter(), y.diameter()), True, 0)

    grid = _ValueGrid(x, y)
    ry = grid.ry
    rx = grid.rx
    gap = grid.gap
    zero_rank = grid.rank[Fraction(0)]

    def _annotate(subs):
        out = []
        for sub in subs:
            worst = zero_rank
            for p in range(len(sub)):
                row = ry[sub[p]]
                for q in range(p + 1, len(sub)):
                    r = row[sub[q]]
                    if r > worst:
                        worst = r
            out.append((sub, sum(1 << a for a in sub), worst))
        return out

    last_level = _annotate(_subsets_last_level_order(m))
    inner_level = _annotate(_subsets_inner_level_order(m))
    full_mask = (1 << m) - 1

    # The full product is always a correspondence, always strong, and its
    # distortion is exactly max(diam X, diam Y); it seeds the incumbent.
    full_rank = grid.rank[max(x.diameter(), y.diameter()).fraction]
    if strong:
        floor_rank = grid.rank[spectra_disagreement_bound(x, y).fraction]
    else:
        floor_rank = grid.rank[x.diameter().abs_diff(y.diameter()).fraction]

    budget_state = _Budget(budget)
    best_rank = full_rank
    best_sets: Optional[list[tuple[int, ...]]] = None  # None: full product

    chosen: list[tuple[int, ...]] = []
    cover_count = [0] * m
    partners_of_y: list[list[int]] = [[] for _ in range(m)]

    def strong_check(level: int, partial: int) -> bool:
        """Partner conditions over decided complement pairs.

        Equality violations are final. A candidate equilibrium value must
        exceed the final distortion, so one at or below the current partial
        distortion already disqualifies the branch. At a covering leaf,
        where partial is the final distortion, this is the complete
        strongness test.
        """
        for xx in range(level + 1):
            sub = chosen[xx]
            sset = set(sub)
            rxx = rx[xx]
            for yy in range(m):
                if cover_count[yy] == 0 or yy in sset:
                    continue
                row = ry[yy]
                common = row[sub[0]]
                for y_prime in sub[1:]:
                    if row[y_prime] != common:
                        return False
                for x_prime in partners_of_y[yy]:
                    if rxx[x_prime] != common:
                        return False
                if common <= partial:
                    return False
        return True

    def dfs(level: int, partial: int, covered: int, cutoff: int, find_first: bool):
        nonlocal best_rank, best_sets
        if budget_state.spend():
            raise _Exhausted
        last = level == n - 1
        missing = full_mask & ~covered
        for sub, mask, internal in (last_level if last else inner_level):
            if last and (mask & missing) != missing:
                continue
            new_rank = partial if partial >= internal else internal
            if new_rank >= cutoff:
                continue
            ok = True
            for i in range(level):
                gi = gap[i][level]
                for a in chosen[i]:
                    row = gi[a]
                    for b in sub:
                        r = row[b]
                        if r > new_rank:
                            if r >= cutoff:
                                ok = False
                                break
                            new_rank = r
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                continue

            chosen.append(sub)
            for b in sub:
                cover_count[b] += 1
                partners_of_y[b].append(level)
            try:
                if strong and not strong_check(level, new_rank):
                    continue
                if last:
                    if find_first:
                        raise _Found(list(chosen))
                    if new_rank < best_rank:
                        best_rank = new_rank
                        best_sets = list(chosen)
                        cutoff = best_rank
                        if best_rank <= floor_rank:
                            raise _Done
                else:
                    dfs(level + 1, new_rank, covered | mask, cutoff, find_first)
                    if not find_first:
                        cutoff = best_rank
            finally:
                chosen.pop()
                for b in sub:
                    cover_count[b] -= 1
                    partners_of_y[b].pop()

    optimal = True
    if best_rank > floor_rank:
        try:
            dfs(0, zero_rank, 0, best_rank, find_first=False)
        except _Done:
            pass
        except _Exhausted:
            optimal = False

    value = grid.exact(best_rank)

    # Second pass for the lexicographically smallest optimal witness. When
    # the optimum reaches min(diam X, diam Y), a strong correspondence can
    # have no complement entries (their equilibrium values would have to
    # exceed the distortion yet stay within the smaller diameter), so the
    # full product is the unique optimal witness and no search is needed.
    witness_sets = best_sets
    if optimal:
        if strong and value >= min(x.diameter(), y.diameter()):
            witness_sets = None
        else:
            try:
                dfs(0, zero_rank, 0, best_rank + 1, find_first=True)
                witness_sets = None  # only the full product attains the value
            except _Found as hit:
                witness_sets = hit.sets
            except _Exhausted:
                witness_sets = best_sets

    if witness_sets is None:
        corr = full_product(x, y)
    else:
        pairs = tuple((i, b) for i in range(n) for b in witness_sets[i])
        corr = Correspondence(x, y, pairs)
    return SearchResult(corr, value, optimal, budget_state.used)


def min_distortion_correspondence(
    x: UltrametricSpace,
    y: UltrametricSpace,
    budget: Optional[int] = None,
    *,
    product_cap: int = DEFAULT_PRODUCT_CAP,
) -> SearchResult:
    """Exact minimum distortion over all correspondences.

    Branch-and-bound over per-left-point partner subsets, pruning branches
    whose partial distortion already reaches the incumbent; the diameter
    difference is a global floor. Ties are broken toward the
    lexicographically smallest pair set.
    """
    return _search(x, y, strong=False, budget=budget, product_cap=product_cap)


def min_distortion_strong_correspondence(
    x: UltrametricSpace,
    y: UltrametricSpace,
    budget: Optional[int] = None,
    *,
    product_cap: int = DEFAULT_PRODUCT_CAP,
) -> SearchResult:
    """Exact minimum distortion over strong correspondences.

    Same search with partner-equality conditions enforced along the way and
    the full strongness test at covering leaves; the spectra disagreement
    bound is a global floor. This minimum is the non-Archimedean
    Gromov-Hausdorff distance of the two spaces.
    """
    return _search(x, y, strong=True, budget=budget, product_cap=product_cap)
