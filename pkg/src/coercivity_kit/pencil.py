"""Exact criterion regions along an affine pencil L_t = base + t*direction.

Each clause of a criterion becomes, for every cone generator C, a polynomial
inequality in t once the positive denominators (L_t^2, L_t.C) are cleared.
With the alpha clause present the polynomials can reach degree five, so roots
come from :mod:`algebraic` rather than from a single quadratic field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import algebraic as alg
from .alpha import AlphaModel, AlphaPiece, eval_alpha
from .cones import CurveClass, ample_range, generators
from .criteria import alpha_slope_check, canonical_criterion, extension_check, lsy_check
from .errors import DenominatorSignChange, NotApplicable
from .intervals import Interval, IntervalSet, compare_intervals, endpoint_json, solve_poly
from .lattice import Pencil
from .scalar import QuadraticPoly

__all__ = [
    "CLAUSES",
    "ClausePoly",
    "Binding",
    "SweepReport",
    "clause_to_polys",
    "sweep",
    "compare_intervals",
]

# clause name -> (criterion, needs alpha, per generator)
CLAUSES = {
    "slope-alpha": ("alpha-slope", True, False),
    "slope-nef": ("alpha-slope", False, True),
    "extension-gap": ("extension", True, False),
    "extension-ample": ("extension", True, True),
    "lsy-alpha-positive": ("lsy", True, False),
    "lsy-first-threshold": ("lsy", True, True),
    "lsy-second-threshold": ("lsy", True, True),
}

CRITERION_CLAUSES = {
    "alpha-slope": ("slope-alpha", "slope-nef"),
    "extension": ("extension-gap", "extension-ample"),
    "lsy": ("lsy-alpha-positive", "lsy-first-threshold", "lsy-second-threshold"),
}


@dataclass(frozen=True)
class ClausePoly:
    clause: str
    coeffs: tuple  # Fractions, highest degree first
    sense: str  # ">" or ">="
    witness: Optional[CurveClass]

    @property
    def degree(self) -> int:
        return alg.degree(self.coeffs)

    @property
    def quadratic(self) -> Optional[QuadraticPoly]:
        c = alg.trim(self.coeffs)
        if len(c) > 3:
            return None
        return QuadraticPoly(*((Fraction(0),) * (3 - len(c)) + c))

    @property
    def strict(self) -> bool:
        return self.sense == ">"

    def key(self) -> tuple:
        """Coefficients scaled to leading coefficient +-1 (same solution set)."""
        c = alg.trim(self.coeffs)
        if not c:
            return ()
        lead = abs(c[0])
        return tuple(x / lead for x in c)

    def to_json(self) -> dict:
        return {
            "clause": self.clause,
            "poly": [str(c) for c in alg.trim(self.coeffs)],
            "sense": self.sense,
            "witness": self.witness.to_json() if self.witness else None,
        }


def _lin(q: QuadraticPoly) -> tuple:
    return alg.trim(q.coefficients())


def _pencil_data(pencil: Pencil):
    minus_k = pencil.surface.anticanonical()
    kL = _lin(pencil.dot(minus_k))
    LL = _lin(pencil.square())
    return minus_k, kL, LL


def _den_sign(piece: AlphaPiece, region: IntervalSet) -> int:
    den = piece.den_coeffs()
    neg = region & solve_poly(den, "<=")
    pos = region & solve_poly(den, ">=")
    if neg.is_empty:
        return 1
    if pos.is_empty:
        return -1
    raise DenominatorSignChange(f"alpha denominator changes sign on {region}")


def clause_to_polys(
    pencil: Pencil,
    clause: str,
    alpha_piece: Optional[AlphaPiece] = None,
    region: Optional[IntervalSet] = None,
) -> list[ClausePoly]:
    """Polynomials p with (clause holds at t) <=> p(t) > 0 (or >= 0) for every p, t in region."""
    if clause not in CLAUSES:
        raise ValueError(f"unknown clause {clause!r}")
    _, needs_alpha, per_gen = CLAUSES[clause]
    minus_k, kL, LL = _pencil_data(pencil)
    if region is not None and not (region & solve_poly(LL, "<=")).is_empty:
        raise DenominatorSignChange(f"L_t^2 is not positive on all of {region}")
    if needs_alpha:
        if alpha_piece is None:
            raise ValueError(f"clause {clause} needs an alpha piece")
        if not alpha_piece.is_rational:
            raise ValueError("sweeps need alpha pieces with rational coefficients")
        N = alpha_piece.num_coeffs()
        sg = _den_sign(alpha_piece, region if region is not None else IntervalSet([alpha_piece.interval]))
        D = alg.scale(alpha_piece.den_coeffs(), sg)  # positive on the region
        N = alg.scale(N, sg)
    mul, add, scale = alg.mul, alg.add, alg.scale

    if clause == "slope-alpha":  # alpha > (2/3) mu
        return [ClausePoly(clause, add(scale(mul(N, LL), 3), scale(mul(kL, D), -2)), ">", None)]
    if clause == "extension-gap":  # same polynomial, read as eps > 0
        return [ClausePoly(clause, add(scale(mul(N, LL), 3), scale(mul(kL, D), -2)), ">", None)]
    if clause == "lsy-alpha-positive":
        return [ClausePoly(clause, N, ">", None)]

    out = []
    for c in generators(pencil.surface):
        kC = minus_k.dot(c.cls)
        LC = _lin(pencil.dot(c.cls))
        if clause == "slope-nef":  # 3 (-K.C) L^2 - 2 (-K.L)(L.C) >= 0
            p = add(scale(LL, 3 * kC), scale(mul(kL, LC), -2))
            out.append(ClausePoly(clause, p, ">=", c))
        elif clause == "extension-ample":  # (-K.C) + (alpha/2 - mu)(L.C) > 0, times 2 D L^2
            p = add(add(scale(mul(LL, D), 2 * kC), mul(mul(N, LL), LC)), scale(mul(mul(kL, LC), D), -2))
            out.append(ClausePoly(clause, p, ">", c))
        elif clause == "lsy-first-threshold":  # (3/2) alpha > (-K.C)/(L.C)
            p = add(scale(mul(N, LC), 3), scale(D, -2 * kC))
            out.append(ClausePoly(clause, p, ">", c))
        elif clause == "lsy-second-threshold":  # (3/2) alpha > 2 mu - (-K.C)/(L.C)
            p = add(
                add(scale(mul(mul(N, LL), LC), 3), scale(mul(mul(kL, LC), D), -4)),
                scale(mul(LL, D), 2 * kC),
            )
            out.append(ClausePoly(clause, p, ">", c))
    return out


@lru_cache(maxsize=4096)
def _solve_strict(key: tuple) -> IntervalSet:
    return solve_poly(key, ">")


@dataclass(frozen=True)
class Binding:
    endpoint: object
    side: str  # "lower" or "upper"
    source: str  # clause name, "ample-range", "range" or "alpha-piece"
    witness: Optional[CurveClass]
    poly: Optional[tuple]

    def to_json(self) -> dict:
        return {
            "endpoint": endpoint_json(self.endpoint),
            "side": self.side,
            "source": self.source,
            "witness": self.witness.to_json() if self.witness else None,
            "poly": [str(c) for c in self.poly] if self.poly else None,
        }


@dataclass(frozen=True)
class SweepReport:
    criterion: str
    pencil: Pencil
    region: IntervalSet
    ample_range: IntervalSet
    working_range: IntervalSet
    bindings: tuple[Binding, ...]
    clause_polys: int
    distinct_polys: int
    assume_alpha: bool
    alpha_model: Optional[AlphaModel]
    origin: Fraction = Fraction(0)

    def binding(self, side: str, index: int = 0) -> Binding:
        found = [b for b in self.bindings if b.side == side]
        return found[index]

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "kind": "sweep",
            "criterion": self.criterion,
            "parameter": _parameter_note(self.pencil, self.origin),
            "pencil": self.pencil.to_json(),
            "ample_range": self.ample_range.to_json(),
            "working_range": self.working_range.to_json(),
            "region": self.region.to_json(),
            "bindings": [b.to_json() for b in self.bindings],
            "clause_polys": self.clause_polys,
            "distinct_polys": self.distinct_polys,
            "assume_alpha": self.assume_alpha,
            "alpha_model": self.alpha_model.name if self.alpha_model else None,
            "alpha_provenance": self.alpha_model.provenance if self.alpha_model else None,
        }


def _parameter_note(pencil: Pencil, origin) -> str:
    base = pencil.base.label()
    direction = pencil.direction.label()
    if origin:
        return f"L_t = ({base}) + (t - {origin})*({direction})"
    return f"L_t = ({base}) + t*({direction})"


def _as_set(rng) -> Optional[IntervalSet]:
    if rng is None or isinstance(rng, IntervalSet):
        return rng
    if isinstance(rng, Interval):
        return IntervalSet([rng])
    lo, hi = rng
    return IntervalSet.closed(lo, hi)


def sweep(
    pencil: Pencil,
    criterion: str,
    alpha_model: Optional[AlphaModel] = None,
    assume_alpha: bool = False,
    range=None,
) -> SweepReport:
    """Exact set of t in range where the criterion holds for L_t.

    All clauses are solved strictly, so regions are open apart from degenerate
    point ranges.  ``assume_alpha`` drops the alpha clause of the alpha-slope
    criterion and keeps the nef clause alone.
    """
    criterion = canonical_criterion(criterion)
    if criterion not in CRITERION_CLAUSES:
        raise ValueError(f"sweeps support {sorted(CRITERION_CLAUSES)}, not {criterion!r}")
    if assume_alpha and criterion != "alpha-slope":
        raise NotApplicable("assume-alpha mode only exists for the alpha-slope criterion")
    if not assume_alpha and alpha_model is None:
        raise ValueError(f"criterion {criterion} needs an alpha model (or assume_alpha for alpha-slope)")
    if alpha_model is not None and alpha_model.family is not None:
        fam = alpha_model.family.pencil
        if fam != pencil:
            raise ValueError("alpha model family differs from the swept pencil")
    amp = ample_range(pencil)
    work = _as_set(range)
    if work is None:
        work = amp
    elif not work.issubset(amp):
        raise ValueError(f"range {work} is not inside the ample range {amp}")

    clauses = CRITERION_CLAUSES[criterion]
    if assume_alpha:
        parts = [(None, work)]
        clauses = ("slope-nef",)
    else:
        parts = []
        for piece in alpha_model.pieces:
            sub = work & IntervalSet([piece.interval])
            if not sub.is_empty:
                parts.append((piece, sub))

    region = IntervalSet.empty()
    all_polys: list[ClausePoly] = []
    seen: dict = {}
    for piece, sub in parts:
        local = sub
        for name in clauses:
            for cp in clause_to_polys(pencil, name, piece if CLAUSES[name][1] else None, sub):
                all_polys.append(cp)
                k = cp.key()
                if k not in seen:
                    seen[k] = cp
                    # closed pieces of the model must not reopen a point where a clause vanishes
                local = local & _solve_strict(k) if k else (local if _const_ok(cp) else IntervalSet.empty())
        region = region | local

    bindings = _bindings(region, list(seen.values()), amp, work, alpha_model)
    return SweepReport(
        criterion, pencil, region, amp, work, tuple(bindings), len(all_polys), len(seen), assume_alpha, alpha_model
    )


def _const_ok(cp: ClausePoly) -> bool:
    return cp.sense == ">=" and not alg.trim(cp.coeffs)


def _bindings(region, polys, amp, work, model) -> list[Binding]:
    out = []
    for iv in region:
        for side, e in (("lower", iv.lo), ("upper", iv.hi)):
            if e is None:
                continue
            hit = None
            for cp in polys:
                c = alg.trim(cp.coeffs)
                if c and alg.sign_at(c, e) == 0:
                    hit = cp
                    break
            if hit is not None:
                out.append(Binding(e, side, hit.clause, hit.witness, alg.trim(hit.coeffs)))
            elif e in amp.endpoints():
                out.append(Binding(e, side, "ample-range", None, None))
            elif e in work.endpoints():
                out.append(Binding(e, side, "range", None, None))
            else:
                out.append(Binding(e, side, "alpha-piece", None, None))
    return out


def sample_points(report: SweepReport, count: int = 200) -> list[Fraction]:
    """Rational points spread across the working range (finite parts only)."""
    pts = []
    for iv in report.working_range:
        lo = alg.rational_bounds(iv.lo, Fraction(1, 10**9))[1] if iv.lo is not None else None
        hi = alg.rational_bounds(iv.hi, Fraction(1, 10**9))[0] if iv.hi is not None else None
        if lo is None and hi is None:
            lo, hi = Fraction(-5), Fraction(5)
        elif lo is None:
            lo = hi - 5
        elif hi is None:
            hi = lo + 5
        if lo == hi:
            pts.append(lo)
            continue
        for k in range(count):
            t = lo + (hi - lo) * Fraction(2 * k + 1, 2 * count)
            if iv.contains(t):
                pts.append(t)
    return pts


def margin_table(report: SweepReport, count: int = 200) -> tuple[list[str], list[list]]:
    """(header, rows) of per-clause margins at sample points, for plotting."""
    checks = {"alpha-slope": alpha_slope_check, "extension": extension_check, "lsy": lsy_check}
    rows = []
    header = None
    for t in sample_points(report, count):
        L = report.pencil.at(t)
        if report.assume_alpha:
            v = alpha_slope_check(L, 10**6)
            conds = [c for c in v.conditions if c.name != "alpha-exceeds-slope"]
        else:
            v = checks[report.criterion](L, eval_alpha(report.alpha_model, t))
            conds = list(v.conditions)
        names = [c.name for c in conds]
        if header is None:
            header = ["t", "in_region"] + names
        by_name = {c.name: float(c.margin) for c in conds if c.margin is not None}
        vals = [by_name.get(name, float("nan")) for name in header[2:]]
        rows.append([float(t + report.origin), int(report.region.contains(t))] + vals)
    if header is None:
        header = ["t", "in_region"]
    return header, rows
