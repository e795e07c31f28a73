"""Acceptance gate: one pass/fail line per criterion."""

import random
import time
from fractions import Fraction

import pytest

from coercivity_kit.alpha import (
    check_continuity_modulus,
    continuity_budget,
    eval_alpha,
    fixture_names,
    load_fixture,
)
from coercivity_kit.cones import count_minus_one, enumerate_curves, is_ample, weyl_generators, MINUS_ONE
from coercivity_kit.criteria import alpha_slope_check, extension_check, lsy_check
from coercivity_kit.intervals import IntervalSet, compare_intervals
from coercivity_kit.lab import GeometrySpec, draw_sample, lemma_suite, path_agreement, reference_sample, refinement_ratios
from coercivity_kit.lab.functionals import DEFAULT_GRID
from coercivity_kit.lattice import DivisorClass, SurfaceSpec, dp8_pencil
from coercivity_kit.reproduce import reproduce
from coercivity_kit.scalar import ExactScalar

from conftest import ACCEPTANCE_LINES
from test_cones import EXPECTED, brute_force_minus_one

DP8 = SurfaceSpec.blowup(8)
LO = ExactScalar(10, -1, 10, 9)
HI = ExactScalar(-2, 1, 10)


def report(capsys, number: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


@pytest.fixture(scope="module")
def suites():
    t0 = time.perf_counter()
    sphere = lemma_suite(GeometrySpec("sphere"), 1000, seed=42)
    product = lemma_suite(GeometrySpec("product"), 1000, seed=7)
    return sphere, product, time.perf_counter() - t0


def test_criterion_1_headline_interval(capsys):
    t0 = time.perf_counter()
    rep = reproduce("headline-interval")
    elapsed = time.perf_counter() - t0
    region = rep.targets[0].computed
    lo, hi = region["intervals"][0]["lo"], region["intervals"][0]["hi"]
    exact = (lo["exact"], hi["exact"]) == (str(LO), str(HI)) and region["intervals"][0]["closed"] == [False, False]
    ok = rep.ok and exact and elapsed < 1.0
    report(
        capsys, 1, ok,
        f"({lo['exact']}, {hi['exact']}) ~ ({lo['approx']:.4f}, {hi['approx']:.4f}), "
        f"witnesses {[t.computed for t in rep.targets if t.name.endswith('witness')]}, {elapsed:.3f}s",
    )


def test_criterion_2_containment(capsys):
    t0 = time.perf_counter()
    rel = compare_intervals(IntervalSet.open(LO, HI), IntervalSet.open(Fraction(4, 5), Fraction(10, 9)))
    elapsed = time.perf_counter() - t0
    report(capsys, 2, rel == "a-strictly-contains-b" and elapsed < 1.0, f"{rel}, {elapsed:.4f}s")


def test_criterion_3_curve_counts(capsys):
    t0 = time.perf_counter()
    enumerate_curves.cache_clear()
    counts = {k: count_minus_one(k) for k in range(1, 9)}
    oracle = {k: len(brute_force_minus_one(k)) for k in range(1, 9)}
    vecs = {tuple(int(x) for x in c.cls.coeffs) for c in enumerate_curves(8) if c.role == MINUS_ONE}
    closed = all({g(v) for v in vecs} == vecs for g in weyl_generators(8))
    elapsed = time.perf_counter() - t0
    ok = counts == oracle == EXPECTED and closed and elapsed < 10
    report(capsys, 3, ok, f"counts {list(counts.values())}, oracle agrees {counts == oracle}, Weyl closure {closed}, {elapsed:.2f}s")


def _random_ample(rng: random.Random) -> DivisorClass:
    while True:
        v = tuple(rng.randint(-4, 4) for _ in range(9))
        d = DivisorClass(DP8, v) + DP8.anticanonical() * rng.randint(3, 12)
        if is_ample(d):
            return d


def test_criterion_4_scaling(capsys):
    rng = random.Random(4)
    mismatches, total = 0, 0
    for _ in range(100):
        L = _random_ample(rng)
        alpha = Fraction(rng.randint(1, 30), rng.randint(1, 20))
        for t in (Fraction(2), Fraction(3), Fraction(1, 5)):
            for fn in (alpha_slope_check, extension_check, lsy_check):
                total += 1
                mismatches += fn(L, alpha).holds != fn(L * t, alpha / t).holds
    report(capsys, 4, mismatches == 0, f"{total} comparisons, {mismatches} mismatches")


def test_criterion_5_implication(capsys):
    pencil = dp8_pencil()
    exceptions, held = 0, 0
    for name in fixture_names():
        model = load_fixture(name)
        if model.family.pencil != pencil:
            continue
        for k in range(1, 501):
            t = Fraction(4, 3) * Fraction(k, 501)
            L, a = pencil.at(t), eval_alpha(model, t)
            if alpha_slope_check(L, a).holds:
                held += 1
                exceptions += not extension_check(L, a).holds
    report(capsys, 5, exceptions == 0 and held > 0, f"alpha-slope held at {held} grid points, {exceptions} exceptions")


def test_criterion_6_continuity(capsys):
    t0 = time.perf_counter()
    rng = random.Random(6)
    exact = 0
    for _ in range(100):
        a = Fraction(rng.randint(1, 100), rng.randint(1, 30))
        c = Fraction(rng.randint(1, 50), rng.randint(1, 30))
        eps = Fraction(rng.randint(1, 100), rng.randint(1, 30))
        exact += continuity_budget(a, c, eps).bound == eps / 2
    shipped = {name: check_continuity_modulus(load_fixture(name)).ok for name in fixture_names()}
    negative = check_continuity_modulus(load_fixture("dp8_jump", negative=True))
    elapsed = time.perf_counter() - t0
    ok = exact == 100 and all(shipped.values()) and not negative.ok and elapsed < 5
    report(
        capsys, 6, ok,
        f"bound = eps/2 in {exact}/100, shipped {shipped}, negative fixture fails {len(negative.failures)} pairs, {elapsed:.2f}s",
    )


def test_criterion_7_lemma_suite(capsys, suites):
    sphere, product, elapsed = suites
    summands = all(v >= -r.tol for r in product.results for v in r.report.summands)
    ok = sphere.ok and product.ok and summands and len(sphere.results) == len(product.results) == 1000 and elapsed < 300
    report(
        capsys, 7, ok,
        f"sphere {len(sphere.violations)} violations, product {len(product.violations)} violations, "
        f"n=2 summands non-negative {summands}, {elapsed:.1f}s",
    )


def test_criterion_8_path_independence(capsys):
    t0 = time.perf_counter()
    worst, ratios_ok, count = 0.0, True, 0
    for kind in ("sphere", "product"):
        geom = GeometrySpec(kind)
        N = DEFAULT_GRID[geom.n]
        for i in range(25):
            s = reference_sample(geom, i) if i < 2 else draw_sample(geom, 2024, i)
            worst = max(worst, path_agreement(s)["relative"])
            r = refinement_ratios(s, (N // 4, N // 2, N))
            ratios_ok &= all(3 <= v <= 5 for v in r.values())
            count += 1
    elapsed = time.perf_counter() - t0
    ok = count == 50 and worst <= 1e-4 and ratios_ok and elapsed < 300
    report(capsys, 8, ok, f"{count} samples, worst relative gap {worst:.2e}, ratios in [3,5] {ratios_ok}, {elapsed:.1f}s")


def test_criterion_9_coercivity_witness(capsys, suites):
    sphere = suites[0]
    w = sphere.witness
    stored = sphere.to_json()["coercivity_witness"] == w
    report(capsys, 9, bool(w["ok"]) and w["a"] > 0 and stored, f"M >= a I + b with a = {w['a']:.4f}, b = {w['b']} over {w['samples']} samples")
