"""PNG figures written next to the CSV tables.

Everything renders through the Agg backend so the CLI works headless.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 8,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "lines.linewidth": 1.0,
    "lines.markersize": 2,
    "figure.dpi": 150,
    # fixed metadata keeps repeated runs byte-identical
    "savefig.dpi": 150,
}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def _finite(v) -> bool:
    return isinstance(v, (int, float)) and math.isfinite(v)


def _symlog(v: float) -> float:
    return math.copysign(math.log1p(abs(v)), v)


def plot_margins(header: list[str], rows: list[list], path, title: str = "") -> Path:
    """Per-clause margins along the pencil, region shaded."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.0))
        ts = [r[0] for r in rows]
        for j, name in enumerate(header[2:], start=2):
            ys = [_symlog(r[j]) if _finite(r[j]) else float("nan") for r in rows]
            ax.plot(ts, ys, label=name)
        inside = [r[1] for r in rows]
        lo = None
        for t, flag in zip(ts + [None], inside + [0]):
            if flag and lo is None:
                lo = t
            elif not flag and lo is not None:
                ax.axvspan(lo, prev, color="0.85", zorder=0)
                lo = None
            prev = t
        ax.axhline(0.0, color="k", linewidth=0.5)
        ax.set_xlabel("t")
        ax.set_ylabel("sign(m) log(1+|m|)")
        if title:
            ax.set_title(title)
        if len(header) > 2:
            ax.legend(loc="best", frameon=False)
        fig.tight_layout()
        return _save(fig, path)


def plot_lab(header: list[str], rows: list[list], path, witness: dict | None = None, title: str = "") -> Path:
    """Scatter of (I, M) with the coercivity line when a witness exists."""
    iI, iM = header.index("I"), header.index("M")
    xs = [r[iI] for r in rows]
    ys = [r[iM] for r in rows]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 3.0))
        ax.scatter(xs, ys, s=3, color="#2b8cbe")
        if witness and witness.get("a") is not None and xs:
            a, b = witness["a"], witness["b"]
            top = max(xs)
            ax.plot([0.0, top], [b, a * top + b], color="#d95f02", label=f"M = {a:.3g} I + {b:.3g}")
            ax.legend(loc="upper left", frameon=False)
        ax.set_xlabel("I")
        ax.set_ylabel("M")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        return _save(fig, path)


def plot_alpha(model, path, count: int = 400) -> Path:
    """Piecewise alpha model over its finite domain."""
    from .alpha import eval_alpha

    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 3.0))
        for piece in model.pieces:
            lo = float(piece.interval.lo) if piece.interval.lo is not None else 0.0
            hi = float(piece.interval.hi) if piece.interval.hi is not None else lo + 4.0
            ts, vs = [], []
            for k in range(count):
                t = lo + (hi - lo) * (k + 0.5) / count
                try:
                    vs.append(float(eval_alpha(model, t)))
                except Exception:
                    continue
                ts.append(t)
            ax.plot(ts, vs, color="#08589e")
        ax.set_xlabel("t")
        ax.set_ylabel("alpha")
        ax.set_title(model.name or "alpha model")
        fig.tight_layout()
        return _save(fig, path)
