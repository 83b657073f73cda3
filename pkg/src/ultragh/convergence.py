"""Sequence-level tools: splits, convergence certificates, SUTB, diameters.

Everything here works on a supplied finite prefix of a sequence; limits over
infinite data are not certifiable, and the reports say what was checked
rather than claiming a limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .exact import ExactValue, ZERO
from .errors import EpsilonTooLargeError, LengthMismatchError, MethodDisagreementError
from .spaces import (
    UltrametricSpace,
    ball_partition,
    is_epsilon_net,
    weight_spectrum,
)
from .isometries import MapWitness, is_strong_epsilon_isometry
from .engine import EngineCaps, dhat_gh


@dataclass
class SplitResult:
    """A partition of a big space indexed by the points of a finite target.

    classes[i] collects the indices matched to target point i; diameters and
    pairwise class distances are recomputed from the distance matrix so the
    result replays independently of how it was found.
    """

    classes: tuple[tuple[int, ...], ...]
    class_diameters: tuple[ExactValue, ...]
    pairwise_class_distances: tuple[tuple[ExactValue, ...], ...]


def _class_diameter(space: UltrametricSpace, cls: Sequence[int]) -> ExactValue:
    best = ZERO
    for a in range(len(cls)):
        for b in range(a + 1, len(cls)):
            d = space.dist(cls[a], cls[b])
            if d > best:
                best = d
    return best


def _class_distance(space: UltrametricSpace, ca: Sequence[int], cb: Sequence[int]) -> ExactValue:
    best = None
    for a in ca:
        for b in cb:
            d = space.dist(a, b)
            if best is None or d < best:
                best = d
    return best if best is not None else ZERO


def find_split(
    xn: UltrametricSpace, x: UltrametricSpace, eps: ExactValue
) -> Optional[SplitResult]:
    """Split xn into |x| classes mirroring the target's distances exactly.

    Needs eps below the smallest pairwise distance r0 of the target. The
    search assigns the open eps-balls of xn to target points (merging is
    attempted and then rejected by the diameter condition, since distinct
    balls sit at distance >= eps) and returns the lexicographically
    smallest valid assignment, or None.
    """
    if eps <= ZERO:
        raise ValueError("eps must be positive")
    if len(x) > 1:
        r0 = min(
            x.dist(i, j) for i in range(len(x)) for j in range(i + 1, len(x))
        )
        if eps >= r0:
            raise EpsilonTooLargeError(
                f"eps = {eps} is not below the target's minimum distance {r0}"
            )
    balls = ball_partition(xn, eps)
    n_targets = len(x)
    if len(balls) < n_targets:
        return None

    # Cross-ball distances do not depend on the point chosen in each ball
    # (isoceles property), so each ball is summarized by its representative.
    reps = [c[0] for c in balls]
    assignment: list[int] = []

    def ok(ball_index: int, target: int) -> bool:
        for prev, prev_target in enumerate(assignment):
            if prev_target == target:
                return False  # merged class would have diameter >= eps
            if xn.dist(reps[prev], reps[ball_index]) != x.dist(prev_target, target):
                return False
        return True

    def dfs(ball_index: int) -> bool:
        if ball_index == len(balls):
            return len(set(assignment)) == n_targets
        for target in range(n_targets):
            if ok(ball_index, target):
                assignment.append(target)
                if dfs(ball_index + 1):
                    return True
                assignment.pop()
        return False

    if not dfs(0):
        return None

    classes: list[list[int]] = [[] for _ in range(n_targets)]
    for ball_index, target in enumerate(assignment):
        classes[target].extend(balls[ball_index])
    classes = [sorted(c) for c in classes]
    diameters = tuple(_class_diameter(xn, c) for c in classes)
    matrix = tuple(
        tuple(
            ZERO if i == j else _class_distance(xn, classes[i], classes[j])
            for j in range(n_targets)
        )
        for i in range(n_targets)
    )
    return SplitResult(tuple(tuple(c) for c in classes), diameters, matrix)


def replay_split(
    xn: UltrametricSpace,
    x: UltrametricSpace,
    eps: ExactValue,
    split: SplitResult,
) -> bool:
    """Soundness check: partition, small diameters, exact class distances."""
    seen: set[int] = set()
    for cls in split.classes:
        if not cls:
            return False
        for p in cls:
            if p in seen:
                return False
            seen.add(p)
    if len(seen) != len(xn) or len(split.classes) != len(x):
        return False
    for cls in split.classes:
        if _class_diameter(xn, cls) >= eps:
            return False
    for i in range(len(x)):
        for j in range(len(x)):
            if i == j:
                continue
            if _class_distance(xn, split.classes[i], split.classes[j]) != x.dist(i, j):
                return False
    return True


@dataclass
class ConvergenceCertificateReport:
    entries: tuple[MapWitness, ...]
    all_strong: bool
    epsilons_decreasing: bool
    min_epsilon: Optional[ExactValue]
    holds: bool
    note: str


def check_convergence_certificate(
    sequence: Sequence[UltrametricSpace],
    target: UltrametricSpace,
    maps: Sequence[Sequence[int]],
    epsilons: Sequence[ExactValue],
    direction: str = "to_target",
) -> ConvergenceCertificateReport:
    """Verify per-index strong eps_n-isometries for a finite prefix.

    direction chooses whether maps go sequence[n] -> target or the other way
    round. The eps_n -> 0 limit itself cannot be certified from finite
    data; the report states the observed minimum instead.
    """
    if not (len(sequence) == len(maps) == len(epsilons)):
        raise LengthMismatchError("sequence, maps and epsilons lengths differ")
    if direction not in ("to_target", "from_target"):
        raise ValueError(f"unknown direction {direction!r}")
    entries = []
    for space, f, eps in zip(sequence, maps, epsilons):
        if direction == "to_target":
            entries.append(is_strong_epsilon_isometry(space, target, f, eps))
        else:
            entries.append(is_strong_epsilon_isometry(target, space, f, eps))
    all_strong = all(e.is_strong_eps_isometry for e in entries)
    decreasing = all(
        epsilons[i] >= epsilons[i + 1] for i in range(len(epsilons) - 1)
    )
    min_eps = min(epsilons) if epsilons else None
    return ConvergenceCertificateReport(
        entries=tuple(entries),
        all_strong=all_strong,
        epsilons_decreasing=decreasing,
        min_epsilon=min_eps,
        holds=all_strong and decreasing,
        note=(
            "verified for the supplied finite prefix only; epsilons "
            f"decreasing with minimum {min_eps}" if epsilons else "empty prefix"
        ),
    )


@dataclass
class NetCertificateFailure:
    kind: str  # "cardinality", "net", "target_net" or "distances"
    index: Optional[int]
    detail: str


@dataclass
class NetCertificateReport:
    holds: bool
    failure: Optional[NetCertificateFailure]


def check_net_convergence_certificate(
    sequence: Sequence[UltrametricSpace],
    target: UltrametricSpace,
    nets_per_space: Sequence[Sequence[int]],
    net_in_target: Sequence[int],
    eps: ExactValue,
) -> NetCertificateReport:
    """Check matched eps-nets with equal cardinalities and distances.

    Each listed net must be an eps-net in its own space, share the target
    net's cardinality, and reproduce the target net's pairwise distances
    position by position.
    """
    if len(sequence) != len(nets_per_space):
        raise LengthMismatchError("one net per space is required")
    tnet = list(net_in_target)
    if len(set(tnet)) != len(tnet) or not tnet:
        raise LengthMismatchError("target net must be a nonempty list of distinct indices")
    if not is_epsilon_net(target, tnet, eps):
        return NetCertificateReport(
            False, NetCertificateFailure("target_net", None, "target net is not an eps-net")
        )
    for n, (space, net) in enumerate(zip(sequence, nets_per_space)):
        net = list(net)
        if len(set(net)) != len(net):
            return NetCertificateReport(
                False, NetCertificateFailure("cardinality", n, "net has repeated indices")
            )
        if len(net) != len(tnet):
            return NetCertificateReport(
                False,
                NetCertificateFailure(
                    "cardinality", n,
                    f"net has {len(net)} points, target net has {len(tnet)}",
                ),
            )
        if not is_epsilon_net(space, net, eps):
            return NetCertificateReport(
                False, NetCertificateFailure("net", n, "listed net is not an eps-net")
            )
        for i in range(len(net)):
            for j in range(i + 1, len(net)):
                a = space.dist(net[i], net[j])
                b = target.dist(tnet[i], tnet[j])
                if a != b:
                    return NetCertificateReport(
                        False,
                        NetCertificateFailure(
                            "distances", n,
                            f"positions ({i}, {j}): {a} in space {n} vs {b} in target",
                        ),
                    )
    return NetCertificateReport(True, None)


@dataclass
class SutbReport:
    holds: bool
    witnesses: tuple[Optional[tuple[int, ...]], ...]
    failures: tuple[str, ...]


def sutb_check(
    family: Sequence[UltrametricSpace],
    eps: ExactValue,
    max_net_size: int,
    allowed_weights: Iterable[ExactValue],
) -> SutbReport:
    """Strong uniform total boundedness data for one eps.

    Each space needs an eps-net of at most max_net_size points whose weight
    set lies in allowed_weights. Every eps-net must hit every open eps-ball,
    cross-ball distances do not depend on the representative chosen, and
    extra net points only add weights, so the minimal representative net
    decides the question.
    """
    if eps <= ZERO:
        raise ValueError("eps must be positive")
    if max_net_size < 1:
        raise ValueError("max_net_size must be >= 1")
    allowed = {ExactValue.coerce(v) for v in allowed_weights}
    witnesses: list[Optional[tuple[int, ...]]] = []
    failures: list[str] = []
    for idx, space in enumerate(family):
        classes = ball_partition(space, eps)
        if len(classes) > max_net_size:
            witnesses.append(None)
            failures.append(
                f"space {idx}: every eps-net needs >= {len(classes)} points"
            )
            continue
        reps = tuple(c[0] for c in classes)
        weights = set(weight_spectrum(space, reps))
        stray = weights - allowed
        if stray:
            witnesses.append(None)
            failures.append(
                f"space {idx}: net weights {sorted(map(str, stray))} outside the allowed set"
            )
        else:
            witnesses.append(reps)
    return SutbReport(not failures, tuple(witnesses), tuple(failures))


@dataclass
class DiameterTrendReport:
    diameters: tuple[ExactValue, ...]
    target_diameter: Optional[ExactValue]
    dhat_values: Optional[tuple[ExactValue, ...]]
    equality_forced: Optional[tuple[bool, ...]]
    equality_holds: Optional[tuple[bool, ...]]
    forced_from: Optional[int]
    classification: str
    note: str


def diameter_trend(
    sequence: Sequence[UltrametricSpace],
    target: Optional[UltrametricSpace] = None,
    *,
    caps: Optional[EngineCaps] = None,
    budget: Optional[int] = None,
) -> DiameterTrendReport:
    """Tabulate diameters and, given a target, the per-index distance data.

    Whenever the distance to a positive-diameter target drops below the
    larger of the two diameters, the diameters must be equal (the
    diameter-gap dichotomy); the report verifies this per index and marks
    the suffix where it holds throughout.
    """
    diameters = tuple(s.diameter() for s in sequence)
    if not diameters:
        return DiameterTrendReport(
            (), None, None, None, None, None, "empty",
            "empty sequence; nothing to report",
        )

    if all(d == diameters[0] for d in diameters):
        classification = "constant"
    elif all(diameters[i] >= diameters[i + 1] for i in range(len(diameters) - 1)):
        classification = "nonincreasing"
    else:
        suffix_start = next(
            (k for k in range(len(diameters)) if all(d == diameters[k] for d in diameters[k:])),
            len(diameters) - 1,
        )
        classification = "eventually_constant" if suffix_start < len(diameters) - 1 else "mixed"

    target_diameter = target.diameter() if target is not None else None
    dhat_values = equality_forced = equality_holds = None
    forced_from = None
    if target is not None and target_diameter > ZERO:
        values = []
        forced = []
        holds = []
        for space, diam_n in zip(sequence, diameters):
            report = dhat_gh(space, target, caps=caps, budget=budget,
                             include_classical=False)
            values.append(report.dhat)
            is_forced = report.dhat < max(diam_n, target_diameter)
            equal = diam_n == target_diameter
            if is_forced and not equal:
                raise MethodDisagreementError(
                    "distance below the diameter maximum with unequal "
                    "diameters; this contradicts the diameter-gap dichotomy"
                )
            forced.append(is_forced)
            holds.append(equal)
        dhat_values = tuple(values)
        equality_forced = tuple(forced)
        equality_holds = tuple(holds)
        for k in range(len(forced)):
            if all(forced[k:]):
                forced_from = k
                break

    return DiameterTrendReport(
        diameters=diameters,
        target_diameter=target_diameter,
        dhat_values=dhat_values,
        equality_forced=equality_forced,
        equality_holds=equality_holds,
        forced_from=forced_from,
        classification=classification,
        note="conclusions apply to the supplied finite prefix only",
    )
