"""Golden targets: the headline interval, the containment claim, curve counts and the lab suite."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .alpha import load_fixture
from .cones import count_minus_one
from .intervals import IntervalSet, compare_intervals
from .lattice import DivisorClass, SurfaceSpec, dp8_pencil
from .pencil import sweep
from .scalar import ExactScalar

DP8 = SurfaceSpec.blowup(8)
HEADLINE_LO = ExactScalar(10, -1, 10, 9)
HEADLINE_HI = ExactScalar(-2, 1, 10, 1)
LSY_PUBLISHED = IntervalSet.open(Fraction(4, 5), Fraction(10, 9))
DECIMAL_HINTS = (Fraction(19, 25), Fraction(29, 25))
DECIMAL_TOL = 0.01
LOWER_WITNESS = DivisorClass(DP8, (6,) + (2,) * 7 + (3,))
UPPER_WITNESS = DivisorClass(DP8, (0,) * 8 + (-1,))  # E8
CURVE_COUNTS = {1: 1, 2: 3, 3: 6, 4: 10, 5: 16, 6: 27, 7: 56, 8: 240}


@dataclass(frozen=True)
class Target:
    name: str
    expected: object
    computed: object
    passed: bool
    tolerance: Optional[float] = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "expected": self.expected,
            "computed": self.computed,
            "verdict": "pass" if self.passed else "fail",
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


@dataclass
class ReproReport:
    target: str
    targets: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(t.passed for t in self.targets)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 3

    def add(self, *args, **kw) -> Target:
        t = Target(*args, **kw)
        self.targets.append(t)
        return t

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "kind": "reproduce",
            "target": self.target,
            "ok": self.ok,
            "targets": [t.to_json() for t in self.targets],
        }


def _set_json(s: IntervalSet):
    return s.to_json()


def headline_interval() -> IntervalSet:
    return IntervalSet.open(HEADLINE_LO, HEADLINE_HI)


def repro_headline() -> ReproReport:
    rep = ReproReport("headline-interval")
    result = sweep(dp8_pencil(), "alpha-slope", assume_alpha=True)
    want = headline_interval()
    rep.add("interval", _set_json(want), _set_json(result.region), result.region == want, detail=str(result.region))
    lo, hi = result.binding("lower"), result.binding("upper")
    for b, hint, wit in ((lo, DECIMAL_HINTS[0], LOWER_WITNESS), (hi, DECIMAL_HINTS[1], UPPER_WITNESS)):
        approx = float(b.endpoint)
        rep.add(
            f"{b.side}-decimal",
            {"exact": str(hint), "approx": float(hint)},
            {"approx": round(approx, 12)},
            abs(approx - float(hint)) <= DECIMAL_TOL,
            DECIMAL_TOL,
            f"{approx:.4f}",
        )
        got = b.witness.cls if b.witness else None
        rep.add(
            f"{b.side}-witness",
            wit.label(),
            got.label() if got is not None else None,
            got == wit,
            detail=f"binding clause {b.source}",
        )
    return rep


def repro_containment() -> ReproReport:
    rep = ReproReport("lsy-containment")
    relation = compare_intervals(headline_interval(), LSY_PUBLISHED)
    rep.add(
        "published-window",
        "a-strictly-contains-b",
        relation,
        relation == "a-strictly-contains-b",
        detail=f"{headline_interval()} vs {LSY_PUBLISHED}",
    )
    # the same relation for the window computed from the shipped constant fixture
    model = load_fixture("dp8_constant")
    lsy = sweep(dp8_pencil(), "lsy", model).region
    relation = compare_intervals(headline_interval(), lsy)
    rep.add(
        "computed-window",
        "a-strictly-contains-b",
        relation,
        relation == "a-strictly-contains-b",
        detail=f"{headline_interval()} vs {lsy} (alpha fixture {model.name})",
    )
    return rep


def repro_curve_counts() -> ReproReport:
    rep = ReproReport("curve-counts")
    for k, want in CURVE_COUNTS.items():
        got = count_minus_one(k)
        rep.add(f"k={k}", want, got, got == want)
    return rep


def repro_lemma_suite(samples: int = 100) -> ReproReport:
    from .lab import GeometrySpec, lemma_suite

    rep = ReproReport("lemma-suite")
    for kind, seed in (("sphere", 42), ("product", 7)):
        suite = lemma_suite(GeometrySpec(kind), samples, seed=seed)
        rep.add(
            f"{kind}-violations",
            0,
            len(suite.violations),
            suite.ok,
            detail=f"{samples} samples, seed {seed}",
        )
        if kind == "sphere":
            w = suite.witness
            rep.add("sphere-coercivity-slope", "a > 0", w, bool(w and w["ok"]))
    return rep


TARGETS: dict[str, Callable[..., ReproReport]] = {
    "headline-interval": repro_headline,
    "lsy-containment": repro_containment,
    "curve-counts": repro_curve_counts,
    "lemma-suite": repro_lemma_suite,
}


# older spelling of the headline target
TARGET_ALIASES = {"corollary-1.5": "headline-interval"}


def reproduce(target: str, **kw) -> ReproReport:
    target = TARGET_ALIASES.get(target, target)
    try:
        fn = TARGETS[target]
    except KeyError:
        raise ValueError(f"unknown target {target!r}; choose from {sorted(TARGETS)}") from None
    return fn(**kw)


__all__ = ["ReproReport", "Target", "TARGETS", "TARGET_ALIASES", "reproduce"]
