"""The umbrella distance computation.

dhat_gh computes the non-Archimedean Gromov-Hausdorff distance by several
independent routes and insists they agree exactly:

  * strong_correspondence: branch-and-bound minimum distortion over strong
    correspondences (the distance itself, attained on finite spaces);
  * isometry_scan: the infimum of eps admitting a strong eps-isometry,
    found by a finite threshold scan;
  * approximation_scan: same scan for strong eps-approximations;
  * shortcut_3b: when the diameters differ the distance equals the larger
    diameter, with the spectra bound and the full product as certificates.

Every scan predicate is monotone in eps and piecewise constant between
candidate thresholds (distances and their pairwise differences), so
evaluating at each threshold and one midpoint per open interval turns the
infimum over real eps into a finite exact computation, together with an
attainment flag (true iff the predicate already holds at the infimum).

The classical Gromov-Hausdorff distance (half the minimum distortion over
plain correspondences) and the ratio of the two are computed alongside.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .exact import ExactValue, ZERO
from .errors import (
    BudgetExceededError,
    MethodDisagreementError,
    SearchSpaceTooLargeError,
)
from .spaces import (
    UltrametricSpace,
    candidate_thresholds,
    spectra_disagreement_bound,
)
from .correspondences import (
    Correspondence,
    full_product,
    is_strong_correspondence,
    min_distortion_correspondence,
    min_distortion_strong_correspondence,
)
from .isometries import (
    ApproximationWitness,
    MapWitness,
    exists_strong_epsilon_approximation,
    exists_strong_epsilon_isometry,
)

METHOD_NAMES = ("strong_correspondence", "isometry_scan", "approximation_scan")
TWO = ExactValue(2)


class InfiniteDistance:
    """Display-only encoding of an infinite distance.

    Finite spaces never produce it (the larger diameter is always an upper
    bound); it exists so reports about infinite spaces documented elsewhere
    can be rendered through the same serialization.
    """

    def __str__(self) -> str:
        return "inf"

    def token(self) -> str:
        return "inf"

    def __repr__(self) -> str:
        return "INFINITE"


INFINITE = InfiniteDistance()

DistanceValue = Union[ExactValue, InfiniteDistance]


@dataclass(frozen=True)
class EngineCaps:
    """Instance-size limits for the automatically selected method set."""

    corr_product: int = 36
    iso_product: int = 20
    approx_product: int = 36
    classical_product: int = 36


@dataclass(frozen=True)
class MethodOutcome:
    value: ExactValue
    attained: bool
    witness: object  # Correspondence, MapWitness, ApproximationWitness or None


@dataclass(frozen=True)
class ClassicalResult:
    """Classical distance, or the bracketing interval when the budget ran out."""

    lower: ExactValue
    upper: ExactValue
    witness: Correspondence
    optimal: bool

    @property
    def value(self) -> Optional[ExactValue]:
        return self.upper if self.optimal else None


@dataclass(frozen=True)
class DistanceReport:
    dhat: ExactValue
    dhat_attained: bool
    methods: dict[str, MethodOutcome]
    classical: Optional[ClassicalResult]
    ratio: Optional[ExactValue]
    spectra_lower_bound: ExactValue
    diameter_upper_bound: ExactValue
    agreement: bool
    inexact: bool

    @property
    def classical_dgh(self) -> Optional[ExactValue]:
        return self.classical.value if self.classical is not None else None

    @property
    def spectra_gap(self) -> ExactValue:
        """dhat minus the spectra lower bound (the Thm-4.2(1) slack)."""
        return self.dhat.abs_diff(self.spectra_lower_bound)

    def to_json_dict(self) -> dict:
        witnesses: dict[str, object] = {}
        methods: dict[str, dict] = {}
        for name, outcome in self.methods.items():
            methods[name] = {
                "value": outcome.value.token(),
                "attained": outcome.attained,
            }
            witnesses[name] = _witness_json(outcome.witness)
        if self.classical is not None:
            witnesses["classical"] = _witness_json(self.classical.witness)
        return {
            "dhat": _value_token(self.dhat),
            "dhat_attained": self.dhat_attained,
            "methods": methods,
            "classical_dgh": _value_token(self.classical_dgh),
            "ratio": _value_token(self.ratio),
            "spectra_lower_bound": self.spectra_lower_bound.token(),
            "diameter_upper_bound": self.diameter_upper_bound.token(),
            "agreement": self.agreement,
            "inexact": self.inexact,
            "witnesses": witnesses,
        }


def _value_token(value) -> Optional[str]:
    if value is None:
        return None
    return value.token()


def _witness_json(witness) -> object:
    if witness is None:
        return None
    if isinstance(witness, Correspondence):
        return {"pairs": [[i, j] for i, j in witness.pairs]}
    if isinstance(witness, MapWitness):
        return {
            "images": list(witness.images),
            "epsilon": witness.epsilon.token(),
        }
    if isinstance(witness, ApproximationWitness):
        return {
            "xs": list(witness.xs),
            "ys": list(witness.ys),
            "epsilon": witness.epsilon.token(),
        }
    return str(witness)


def spectra_lower_bound(x: UltrametricSpace, y: UltrametricSpace) -> ExactValue:
    """inf over eps of the thresholds where the filtered spectra agree.

    Equality of the filtered weight sets is monotone in eps and flips for
    the last time at the largest value the spectra disagree on, so the
    infimum is that value exactly, and zero for identical spectra.
    """
    return spectra_disagreement_bound(x, y)


def classical_gh(
    x: UltrametricSpace,
    y: UltrametricSpace,
    budget: Optional[int] = None,
    *,
    product_cap: int = 36,
) -> ClassicalResult:
    """Half the minimum correspondence distortion, with witness.

    On budget exhaustion the result carries the interval between half the
    diameter difference and half the incumbent distortion.
    """
    res = min_distortion_correspondence(x, y, budget, product_cap=product_cap)
    half = res.distortion / TWO
    floor = x.diameter().abs_diff(y.diameter()) / TWO
    if half < floor:
        raise MethodDisagreementError(
            f"classical search returned {half}, below the diameter bound {floor}"
        )
    lower = half if res.optimal else floor
    return ClassicalResult(lower=lower, upper=half, witness=res.correspondence,
                           optimal=res.optimal)


def _scan_infimum(x, y, predicate):
    """Exact infimum of a monotone predicate over positive eps.

    Returns (infimum, attained, witness_at_first_true). Breakpoints are
    contained in candidate_thresholds, so the predicate is constant on the
    open interval between consecutive thresholds; one midpoint probe per
    interval plus the threshold itself decides everything. The sentinel
    threshold above both diameters always satisfies the predicate.
    """
    thresholds = candidate_thresholds(x, y)
    prev = thresholds[0]  # always zero
    for t in thresholds[1:]:
        witness = predicate(prev.midpoint(t))
        if witness is not None:
            return prev, False, witness
        witness = predicate(t)
        if witness is not None:
            return t, True, witness
        prev = t
    raise MethodDisagreementError(
        "scan predicate failed at the sentinel threshold; this is a bug"
    )


def _auto_methods(product: int, caps: EngineCaps) -> tuple[str, ...]:
    names = []
    if product <= caps.corr_product:
        names.append("strong_correspondence")
    if product <= caps.iso_product:
        names.append("isometry_scan")
    if product <= caps.approx_product:
        names.append("approximation_scan")
    return tuple(names)


def dhat_gh(
    x: UltrametricSpace,
    y: UltrametricSpace,
    methods: Optional[Sequence[str]] = None,
    *,
    caps: Optional[EngineCaps] = None,
    budget: Optional[int] = None,
    include_classical: Optional[bool] = None,
) -> DistanceReport:
    """Compute the non-Archimedean Gromov-Hausdorff distance, cross-checked.

    With methods=None the method set is chosen from the caps; an explicit
    sequence runs exactly those. All produced values must agree to the last
    bit or MethodDisagreementError is raised. When the diameters differ the
    shortcut path certifies the value as the larger diameter and runs the
    full-product confirmation instead of the searches.
    """
    caps = caps or EngineCaps()
    slb = spectra_lower_bound(x, y)
    diam_x, diam_y = x.diameter(), y.diameter()
    diam_max = max(diam_x, diam_y)
    product = len(x) * len(y)
    outcomes: dict[str, MethodOutcome] = {}

    if diam_x != diam_y:
        # Larger diameter appears in exactly one spectrum, so the spectra
        # bound meets the full-product upper bound and pins the value.
        if slb != diam_max:
            raise MethodDisagreementError(
                f"spectra bound {slb} does not reach the diameter gap value {diam_max}"
            )
        full = full_product(x, y)
        verdict = is_strong_correspondence(full)
        if not verdict.is_strong or verdict.distortion != diam_max:
            raise MethodDisagreementError(
                "full product confirmation failed on the diameter-gap path"
            )
        outcomes["shortcut_3b"] = MethodOutcome(diam_max, True, None)
        outcomes["strong_correspondence"] = MethodOutcome(diam_max, True, full)
    else:
        if methods is None:
            names = _auto_methods(product, caps)
            if not names:
                raise SearchSpaceTooLargeError(
                    f"|X|*|Y| = {product} exceeds every method cap; pass "
                    "methods=... or wider caps"
                )
        else:
            names = tuple(methods)
            for name in names:
                if name not in METHOD_NAMES:
                    raise ValueError(f"unknown method {name!r}")
            if not names:
                raise ValueError("methods must not be empty")
        for name in names:
            if name == "strong_correspondence":
                res = min_distortion_strong_correspondence(
                    x, y, budget, product_cap=caps.corr_product
                )
                if not res.optimal:
                    raise BudgetExceededError(
                        "strong correspondence search ran out of budget"
                    )
                outcomes[name] = MethodOutcome(res.distortion, True, res.correspondence)
            elif name == "isometry_scan":
                inf, attained, witness = _scan_infimum(
                    x, y,
                    lambda e: exists_strong_epsilon_isometry(x, y, e, budget),
                )
                outcomes[name] = MethodOutcome(inf, attained, witness)
            else:
                inf, attained, witness = _scan_infimum(
                    x, y,
                    lambda e: exists_strong_epsilon_approximation(x, y, e, budget),
                )
                outcomes[name] = MethodOutcome(inf, attained, witness)

    values = {outcome.value for outcome in outcomes.values()}
    if len(values) != 1:
        raise MethodDisagreementError(
            "methods disagree: "
            + ", ".join(f"{k}={v.value}" for k, v in outcomes.items()),
            values={k: v.value for k, v in outcomes.items()},
            witnesses={k: v.witness for k, v in outcomes.items()},
        )
    dhat = values.pop()
    if not (slb <= dhat <= diam_max):
        raise MethodDisagreementError(
            f"value {dhat} violates the sandwich [{slb}, {diam_max}]"
        )

    if include_classical is None:
        include_classical = product <= caps.classical_product
    classical = None
    ratio = None
    if include_classical:
        classical = classical_gh(x, y, budget, product_cap=max(caps.classical_product, product))
        if classical.optimal:
            doubled = classical.value * TWO
            if doubled > dhat:
                raise MethodDisagreementError(
                    f"2 d_GH = {doubled} exceeds dhat = {dhat}"
                )
            if (classical.value == ZERO) != (dhat == ZERO):
                raise MethodDisagreementError(
                    "exactly one of d_GH and dhat vanished"
                )
            if classical.value != ZERO:
                ratio = dhat / classical.value

    return DistanceReport(
        dhat=dhat,
        dhat_attained=any(o.attained for o in outcomes.values()),
        methods=outcomes,
        classical=classical,
        ratio=ratio,
        spectra_lower_bound=slb,
        diameter_upper_bound=diam_max,
        agreement=True,
        inexact=x.inexact or y.inexact,
    )


def metric_ratio(
    x: UltrametricSpace,
    y: UltrametricSpace,
    *,
    caps: Optional[EngineCaps] = None,
    budget: Optional[int] = None,
) -> Optional[ExactValue]:
    """dhat / d_GH, or None when the spaces are isometric (d_GH = 0)."""
    report = dhat_gh(x, y, caps=caps, budget=budget, include_classical=True)
    return report.ratio
