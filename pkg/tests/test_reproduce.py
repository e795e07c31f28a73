from fractions import Fraction

import pytest

import coercivity_kit.reproduce as repro
from coercivity_kit.alpha import load_fixture
from coercivity_kit.lattice import dp8_pencil
from coercivity_kit.pencil import margin_table, sweep
from coercivity_kit.plotting import plot_alpha, plot_lab, plot_margins


def test_headline_target():
    rep = repro.reproduce("headline-interval")
    assert rep.ok and rep.exit_code == 0
    names = {t.name for t in rep.targets}
    assert names == {"interval", "lower-decimal", "upper-decimal", "lower-witness", "upper-witness"}


def test_failed_target_exits_nonzero(monkeypatch):
    monkeypatch.setattr(repro, "HEADLINE_HI", repro.ExactScalar(Fraction(7, 6)))
    rep = repro.reproduce("headline-interval")
    assert not rep.ok and rep.exit_code != 0
    assert [t.name for t in rep.targets if not t.passed] == ["interval"]


def test_containment_and_counts():
    assert repro.reproduce("lsy-containment").ok
    assert repro.reproduce("curve-counts").ok


def test_lemma_suite_target_small():
    rep = repro.reproduce("lemma-suite", samples=3)
    assert rep.ok


def test_unknown_target():
    with pytest.raises(ValueError):
        repro.reproduce("no-such-target")


def test_plots_written(tmp_path):
    rep = sweep(dp8_pencil(), "extension", load_fixture("dp8_constant"))
    header, rows = margin_table(rep, 30)
    a = plot_margins(header, rows, tmp_path / "m.png", "extension")
    b = plot_lab(["sample_id", "I", "M"], [[0, 0.1, 0.2], [1, 0.2, 0.5]], tmp_path / "l.png", {"a": 1.0, "b": -0.01})
    c = plot_alpha(load_fixture("dp8_monotone_bound"), tmp_path / "a.png")
    for p in (a, b, c):
        assert p.read_bytes()[:4] == b"\x89PNG"
