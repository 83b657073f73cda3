"""Brute-force reference implementations, independent of the library's search code.

Everything here favors obvious correctness over speed: plain exhaustive
enumeration with no pruning, rational arithmetic via Fraction, and the
existential form of the strong-correspondence condition (the library uses
the universal form).
"""

from fractions import Fraction
from itertools import permutations


def _fraction_matrix(space):
    n = len(space)
    return [[space.dist(i, j).fraction for j in range(n)] for i in range(n)]


def _nonempty_subsets(m):
    out = []
    for mask in range(1, 1 << m):
        out.append(tuple(b for b in range(m) if mask & (1 << b)))
    return out


def strong_existential(dx, dy, sets, dis):
    """Condition (C_NA): every outside pair has some partner pair realizing
    equal distances strictly above the distortion."""
    n, m = len(sets), len(dy)
    partners_of_y = [[xx for xx in range(n) if yy in sets[xx]] for yy in range(m)]
    for xx in range(n):
        members = set(sets[xx])
        for yy in range(m):
            if yy in members:
                continue
            if not any(
                dx[xx][xp] == dy[yy][yp] and dx[xx][xp] > dis
                for yp in sets[xx]
                for xp in partners_of_y[yy]
            ):
                return False
    return True


def naive_correspondence_minima(x, y):
    """(min distortion, min strong distortion) by unpruned enumeration.

    Every assignment of a nonempty partner subset to each left point is
    visited; covering assignments are the correspondences. Distortion is
    accumulated along the recursion (an evaluation order, not a pruning);
    the strongness test is skipped only when it cannot improve the strong
    minimum.
    """
    n, m = len(x), len(y)
    dx = _fraction_matrix(x)
    dy = _fraction_matrix(y)
    subsets = _nonempty_subsets(m)
    # |dx(i,k) - dy(a,b)| once per quadruple; the enumeration reuses it.
    gap = [
        [
            [[abs(dx[i][k] - dy[a][b]) for b in range(m)] for a in range(m)]
            for k in range(n)
        ]
        for i in range(n)
    ]
    internal = {}
    for sub in subsets:
        worst = Fraction(0)
        for p in range(len(sub)):
            for q in range(p + 1, len(sub)):
                d = dy[sub[p]][sub[q]]
                if d > worst:
                    worst = d
        internal[sub] = worst

    best = [None]
    best_strong = [None]
    sets = []

    def rec(level, partial, covered):
        if level == n:
            if len(covered) != m:
                return
            if best[0] is None or partial < best[0]:
                best[0] = partial
            if best_strong[0] is None or partial < best_strong[0]:
                if strong_existential(dx, dy, sets, partial):
                    best_strong[0] = partial
            return
        for sub in subsets:
            new = partial if partial >= internal[sub] else internal[sub]
            for i in range(level):
                gi = gap[i][level]
                for a in sets[i]:
                    row = gi[a]
                    for b in sub:
                        if row[b] > new:
                            new = row[b]
            sets.append(sub)
            rec(level + 1, new, covered | set(sub))
            sets.pop()

    rec(0, Fraction(0), set())
    return best[0], best_strong[0]


def naive_lex_min_witness(x, y, strong):
    """Among all (strong) correspondences of minimum distortion, the
    lexicographically smallest sorted pair tuple, by full enumeration."""
    n, m = len(x), len(y)
    dx = _fraction_matrix(x)
    dy = _fraction_matrix(y)
    subsets = _nonempty_subsets(m)
    best = [None]
    best_pairs = [None]
    sets = []

    def rec(level):
        if level == n:
            covered = {b for sub in sets for b in sub}
            if len(covered) != m:
                return
            pairs = tuple((i, b) for i in range(n) for b in sets[i])
            worst = Fraction(0)
            for a in range(len(pairs)):
                i, p = pairs[a]
                for c in range(a + 1, len(pairs)):
                    j, q = pairs[c]
                    g = abs(dx[i][j] - dy[p][q])
                    if g > worst:
                        worst = g
            if strong and not strong_existential(dx, dy, sets, worst):
                return
            if (
                best[0] is None
                or worst < best[0]
                or (worst == best[0] and pairs < best_pairs[0])
            ):
                best[0] = worst
                best_pairs[0] = pairs
            return
        for sub in subsets:
            sets.append(sub)
            rec(level + 1)
            sets.pop()

    rec(0)
    return best[0], best_pairs[0]


def isometry_exists(x, y):
    """Distance-preserving bijection search over all permutations."""
    if len(x) != len(y):
        return False
    n = len(x)
    dx = _fraction_matrix(x)
    dy = _fraction_matrix(y)
    for perm in permutations(range(n)):
        if all(
            dx[i][j] == dy[perm[i]][perm[j]]
            for i in range(n)
            for j in range(i + 1, n)
        ):
            return True
    return False


def ball_class_count(space, eps):
    """Number of open eps-balls by transitive closure of d < eps."""
    n = len(space)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    e = eps.fraction
    for i in range(n):
        for j in range(i + 1, n):
            if space.dist(i, j).fraction < e:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    return len({find(a) for a in range(n)})


def spectra_bound_by_scan(x, y, thresholds):
    """Literal ascending scan for the spectra lower bound.

    Evaluates set equality of the filtered spectra at each positive
    threshold and between thresholds, returning the infimum of the region
    where they agree.
    """
    from ultragh import weight_spectrum

    wx = set(weight_spectrum(x).values)
    wy = set(weight_spectrum(y).values)

    def equal_at(eps):
        return {v for v in wx if v >= eps} == {v for v in wy if v >= eps}

    prev = thresholds[0]
    for t in thresholds[1:]:
        if equal_at(prev.midpoint(t)):
            return prev
        if equal_at(t):
            return t
        prev = t
    raise AssertionError("sentinel threshold should always compare equal")


def ultrametric_violations(matrix):
    """All ordered triples (i, j, k) of distinct indices breaking the
    strong triangle inequality, on a raw Fraction matrix."""
    n = len(matrix)
    bad = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if len({i, j, k}) != 3:
                    continue
                if matrix[i][k] > max(matrix[i][j], matrix[j][k]):
                    bad.append((i, j, k))
    return bad
