"""Command-line front end.

Exit codes: 0 success or criterion holds, 3 criterion (or reproduction target)
fails, 64 usage error, 65 malformed data file, 70 internal invariant breach.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .errors import CoercivityKitError, ModelFormatError, NotApplicable

EXIT_OK = 0
EXIT_FAILS = 3
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_INTERNAL = 70

OUTDIR_ENV = "COERCIVITY_KIT_OUTDIR"
CRITERIA = ("alpha-slope", "extension", "lsy", "tian")
# accepted on input, rewritten to the canonical spelling before dispatch
CRITERION_ALIASES = {"dervan": "alpha-slope"}
TARGET_ALIASES = {"corollary-1.5": "headline-interval"}
CONVENTION = (
    "classes are written (h, e1, ..., ek) for h*l - e1*E1 - ... - ek*Ek; "
    "the dP8 pencil is L_t = 3l - E1 - ... - E7 - t*E8, so L_1 = -K"
)


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ------------------------------------------------------------------- config


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation; exact values are kept as literal strings."""

    subcommand: str
    options: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"subcommand": self.subcommand, "options": dict(sorted(self.options.items()))}

    @classmethod
    def from_json(cls, obj: dict) -> "RunConfig":
        return cls(obj["subcommand"], dict(obj.get("options", {})))


def _scalar(text: str):
    from .scalar import parse_scalar

    try:
        return parse_scalar(text)
    except (ValueError, ArithmeticError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _range(text: str):
    parts = [p for p in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("range must be 'lo,hi'")
    lo, hi = (_scalar(p.strip()) for p in parts)
    if not lo <= hi:
        raise argparse.ArgumentTypeError("range needs lo <= hi")
    return lo, hi


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="coercivity-kit", description="Exact coercivity criteria and a numerical functional lab.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", help="JSON file with default option values")
    sub = p.add_subparsers(dest="subcommand", parser_class=_Parser)
    sub.required = True

    c = sub.add_parser("curves", help="list the Mori cone generators of a blow-up")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--out")

    c = sub.add_parser("check", help="evaluate one criterion on one class")
    c.add_argument("--surface", default="dp8")
    c.add_argument("--class", dest="cls", required=True, help="comma-separated coefficients")
    c.add_argument("--alpha", type=_scalar, required=True)
    c.add_argument("--invariance", choices=("plain", "group-invariant"), default="plain")
    c.add_argument("--criterion", choices=CRITERIA + tuple(CRITERION_ALIASES), required=True)
    c.add_argument("--out")

    c = sub.add_parser("pencil", help="sweep a criterion along base + t*dir")
    c.add_argument("--surface", default="dp8")
    c.add_argument("--base", help="base class (default: the dP8 pencil base)")
    c.add_argument("--dir", help="direction class (default: E8 on dP8)")
    c.add_argument("--origin", type=_scalar, default=None, help="report t relative to this value of the direction")
    c.add_argument("--criterion", choices=CRITERIA[:3] + tuple(CRITERION_ALIASES), required=True)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--assume-alpha", "--assume-alpha-condition", dest="assume_alpha", action="store_true")
    g.add_argument("--alpha-model", help="model file, or fixture:<name>")
    c.add_argument("--range", type=_range)
    c.add_argument("--samples", type=_positive_int, default=200)
    c.add_argument("--out")
    c.add_argument("--csv")
    c.add_argument("--no-plot", action="store_true")

    c = sub.add_parser("alpha", help="alpha model utilities")
    asub = c.add_subparsers(dest="action", parser_class=_Parser)
    asub.required = True
    v = asub.add_parser("validate", help="structural and continuity checks of a model file")
    v.add_argument("model", help="model file, or fixture:<name>")
    v.add_argument("--out")
    v.add_argument("--plot")

    c = sub.add_parser("lab", help="randomized inequality suite")
    c.add_argument("--geometry", default="sphere")
    c.add_argument("--samples", type=_positive_int, default=100)
    c.add_argument("--beta", type=float, default=0.9)
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--grid", type=_positive_int)
    c.add_argument("--rel-tol", type=float, default=1e-6)
    c.add_argument("--witness-b", type=float, default=-0.01)
    c.add_argument("--out")
    c.add_argument("--csv")
    c.add_argument("--no-plot", action="store_true")

    c = sub.add_parser("reproduce", help="check a golden target")
    c.add_argument("target", choices=("headline-interval", "lsy-containment", "curve-counts", "lemma-suite", "all") + tuple(TARGET_ALIASES))
    c.add_argument("--samples", type=_positive_int, default=100, help="lemma-suite sample count")
    c.add_argument("--out")
    return p


def _read_config(path: str) -> dict:
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(obj, dict):
        raise DataError(f"{path}: config must be a JSON object")
    return obj


def _config_argv(cfg: dict) -> list[str]:
    out = []
    for key, val in cfg.items():
        flag = "--" + key.replace("_", "-")
        if val is True:
            out.append(flag)
        elif val is False or val is None:
            continue
        else:
            out += [flag, str(val)]
    return out


def parse_config(argv: Sequence[str], config: Optional[str] = None) -> RunConfig:
    """Parse argv (plus optional JSON defaults) into a RunConfig; raises UsageError."""
    argv = list(argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    config = config or known.config
    if config:
        cfg = _read_config(config)
        # explicit flags come last so they override the file
        head = 2 if rest[:1] == ["alpha"] else 1
        if len(rest) >= head:
            rest = rest[:head] + _config_argv(cfg) + rest[head:]
    ns = build_parser().parse_args(rest)
    opts = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "config")}
    for k, v in list(opts.items()):
        if k == "range" and v is not None:
            opts[k] = f"{v[0]},{v[1]}"
        elif v is not None and k in ("alpha", "origin"):
            opts[k] = str(v)
    _validate(ns.subcommand, opts)
    return RunConfig(ns.subcommand, opts)


def _surface(name: str):
    from .lattice import SurfaceSpec

    try:
        return SurfaceSpec.parse(name)
    except (ValueError, CoercivityKitError) as exc:
        raise UsageError(f"--surface: {exc}") from None


def _class(text: str, surface, flag: str):
    from .lattice import parse_class

    try:
        return parse_class(text, surface)
    except (ValueError, ArithmeticError) as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _validate(sub: str, o: dict) -> None:
    if o.get("criterion") in CRITERION_ALIASES:
        o["criterion"] = CRITERION_ALIASES[o["criterion"]]
    if o.get("target") in TARGET_ALIASES:
        o["target"] = TARGET_ALIASES[o["target"]]
    if sub == "check":
        _class(o["cls"], _surface(o["surface"]), "--class")
    elif sub == "pencil":
        s = _surface(o["surface"])
        if (o["base"] is None) != (o["dir"] is None):
            raise UsageError("--base and --dir go together")
        if o["base"] is not None:
            _class(o["base"], s, "--base")
            _class(o["dir"], s, "--dir")
        elif s.name != "dp8":
            raise UsageError("--base/--dir are required off dp8")
        if not o["assume_alpha"] and not o["alpha_model"]:
            raise UsageError("pencil needs --alpha-model or --assume-alpha")
        if o["assume_alpha"] and o["criterion"] != "alpha-slope":
            raise UsageError("--assume-alpha only applies to --criterion alpha-slope")
    elif sub == "lab":
        from .lab import GeometrySpec

        try:
            geom = GeometrySpec.parse(o["geometry"])
        except ValueError as exc:
            raise UsageError(f"--geometry: {exc}") from None
        if not 0 < o["beta"] or (geom.n == 1 and not o["beta"] < 1):
            raise UsageError("--beta must lie in (0, 1) on the sphere")
    elif sub == "curves" and not 0 <= o["k"] <= 8:
        raise UsageError("--k must be in 0..8")


# ------------------------------------------------------------------- output


def _resolve(path: Optional[str]) -> Optional[Path]:
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get(OUTDIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _emit(payload, out: Optional[str]) -> None:
    text = dumps(payload)
    p = _resolve(out)
    if p is None:
        sys.stdout.write(text)
        return
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")
    print(f"wrote {p}", file=sys.stderr)


def _fmt_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(header, rows, path: Optional[str]) -> Optional[Path]:
    p = _resolve(path)
    if p is None:
        return None
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt_cell(v) for v in r])
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(buf.getvalue(), encoding="utf-8")
    print(f"wrote {p}", file=sys.stderr)
    return p


# ------------------------------------------------------------------- commands


def _load_model(ref: str):
    from .alpha import fixture_names, load_fixture, load_model

    if ref.startswith("fixture:"):
        name = ref.split(":", 1)[1]
        negative = name.startswith("negative/")
        name = name.split("/", 1)[1] if negative else name
        if name not in fixture_names(negative):
            raise UsageError(f"unknown fixture {ref!r}")
        return load_fixture(name, negative)
    try:
        return load_model(ref)
    except OSError as exc:
        raise UsageError(f"cannot read {ref}: {exc}") from None


def cmd_curves(o: dict) -> int:
    from .cones import enumerate_curves

    curves = enumerate_curves(o["k"])
    _emit({"schema": 1, "kind": "curves", "k": o["k"], "count": len(curves), "curves": [c.to_json() for c in curves]}, o["out"])
    return EXIT_OK


def cmd_check(o: dict) -> int:
    from .criteria import AlphaValue, run_check
    from .scalar import parse_scalar

    s = _surface(o["surface"])
    L = _class(o["cls"], s, "--class")
    try:
        alpha = AlphaValue(parse_scalar(o["alpha"]), o["invariance"])
        verdict = run_check(o["criterion"], L, alpha)
    except NotApplicable as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit({"schema": 1, "kind": "check", "convention": CONVENTION, **verdict.to_json()}, o["out"])
    return EXIT_OK if verdict.holds else EXIT_FAILS


def _pencil_from(o: dict):
    from .lattice import Pencil, dp8_pencil
    from .scalar import parse_scalar

    s = _surface(o["surface"])
    if o["base"] is None:
        pencil = dp8_pencil()
    else:
        pencil = Pencil(_class(o["base"], s, "--base"), _class(o["dir"], s, "--dir"))
    origin = parse_scalar(o["origin"]).to_fraction() if o.get("origin") else Fraction(0)
    # reparametrize so that t = origin lands on the given base
    return Pencil(pencil.base - pencil.direction * origin, pencil.direction), origin


def cmd_pencil(o: dict) -> int:
    from .pencil import margin_table, sweep
    from .plotting import plot_margins

    pencil, origin = _pencil_from(o)
    model = None if o["assume_alpha"] else _load_model(o["alpha_model"])
    rng = None
    if o["range"]:
        from .scalar import parse_scalar

        rng = tuple(parse_scalar(x).to_fraction() for x in o["range"].split(","))
    try:
        report = sweep(pencil, o["criterion"], model, o["assume_alpha"], rng)
    except NotApplicable as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = report.to_json()
    payload["convention"] = CONVENTION
    if origin:
        payload["origin"] = str(origin)
    print(payload["parameter"], file=sys.stderr)
    _emit(payload, o["out"])
    if o["csv"]:
        header, rows = margin_table(report, o["samples"])
        path = write_csv(header, rows, o["csv"])
        if not o["no_plot"]:
            plot_margins(header, rows, path.with_suffix(".png"), f"{o['criterion']} margins")
    return EXIT_OK if not report.region.is_empty else EXIT_FAILS


def cmd_alpha(o: dict) -> int:
    from .alpha import check_continuity_modulus, validate_model
    from .plotting import plot_alpha

    model = _load_model(o["model"])
    issues = validate_model(model)
    payload = {"schema": 1, "kind": "alpha-validate", "model": model.to_json(), "issues": issues}
    if model.family is not None and not issues:
        payload["continuity"] = check_continuity_modulus(model).to_json()
    elif model.family is not None:
        payload["continuity"] = None
    payload["ok"] = not issues and (payload.get("continuity") is None or payload["continuity"]["ok"])
    _emit(payload, o["out"])
    if o["plot"]:
        plot_alpha(model, _resolve(o["plot"]))
    return EXIT_OK if payload["ok"] else EXIT_FAILS


def cmd_lab(o: dict) -> int:
    from .lab import GeometrySpec, lemma_suite
    from .plotting import plot_lab

    geom = GeometrySpec.parse(o["geometry"])
    suite = lemma_suite(geom, o["samples"], o["beta"], o["seed"], o["grid"], o["rel_tol"], o["witness_b"])
    _emit(suite.to_json(), o["out"])
    if o["csv"]:
        header, rows = suite.rows()
        path = write_csv(header, rows, o["csv"])
        if not o["no_plot"]:
            plot_lab(header, rows, path.with_suffix(".png"), suite.witness, geom.name)
    return EXIT_OK if suite.ok else EXIT_FAILS


def cmd_reproduce(o: dict) -> int:
    from .reproduce import TARGETS, reproduce

    names = sorted(TARGETS) if o["target"] == "all" else [o["target"]]
    reports = []
    for name in names:
        kw = {"samples": o["samples"]} if name == "lemma-suite" else {}
        rep = reproduce(name, **kw)
        for t in rep.targets:
            mark = "PASS" if t.passed else "FAIL"
            print(f"[{mark}] {name} {t.name}: {t.computed if not isinstance(t.computed, dict) else t.detail}", file=sys.stderr)
        reports.append(rep)
    if len(reports) == 1:
        payload = reports[0].to_json()
    else:
        payload = {"schema": 1, "kind": "reproduce", "ok": all(r.ok for r in reports), "reports": [r.to_json() for r in reports]}
    _emit(payload, o["out"])
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAILS


COMMANDS = {
    "curves": cmd_curves,
    "check": cmd_check,
    "pencil": cmd_pencil,
    "alpha": cmd_alpha,
    "lab": cmd_lab,
    "reproduce": cmd_reproduce,
}


def run(config: RunConfig) -> int:
    return COMMANDS[config.subcommand](config.options)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config = parse_config(argv)
        return run(config)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ModelFormatError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except CoercivityKitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # anything else is a broken invariant
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
