"""Command-line front end.

Every subcommand prints one JSON document (to stdout or ``--out``); table
commands can also write CSV.  Floats are printed with 17 significant digits
and exact counts as integers or ``"p/q"`` strings, so identical inputs give
byte-identical files.

Exit codes:

    0  success
    1  a check ran and failed (duality mismatch, current not filling)
    2  bad command line or configuration
    3  malformed input file or word
    4  matrices violate the surface relator
    5  a count did not stabilize within the doubling cap
    6  a search budget was exceeded
    7  input rejected by the geometry (identity class, non-discrete current, ...)
    8  file could not be read or written
    9  numerical ambiguity that could not be resolved
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import errors
from .cubulation import build_wall_set, max_cube_dimension, sageev_fragment, verify_duality
from .currents import WeightedCurrent, format_fraction, intersection_number, pair_with_hyperbolic
from .fuchsian import FuchsianRep, evaluate, relator_residual, rep_from_matrices, standard_rep
from .hypgeo import BoundaryPoint, translation_length
from .linking import SearchOptions, class_geometry
from .metrics import (approximation_experiment, builtin_sequence, delta_estimate, hyperbolic_spectrum,
                      nondiscreteness_check, spectrum)
from .words import ConjugacyClass, enumerate_classes, letter_name

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_RELATOR = 4
EXIT_NOT_STABILIZED = 5
EXIT_BUDGET = 6
EXIT_REJECTED = 7
EXIT_IO = 8
EXIT_AMBIGUOUS = 9

OUTPUT_DIR_ENV = "CUBECURRENTS_OUTPUT_DIR"
TOLERANCE_NAMES = ("initial_margin", "nondiscrete_tol")


class UsageError(Exception):
    pass


# -- serialization -------------------------------------------------------------

def fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    text = format(x, ".17g")
    if not re.search(r"[.eE]", text):
        text += ".0"
    return text


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON with fixed float formatting and insertion-ordered keys."""
    out: list[str] = []

    def emit(o: Any, depth: int) -> None:
        pad = " " * (indent * (depth + 1))
        end = " " * (indent * depth)
        if isinstance(o, bool) or o is None or isinstance(o, (int, str)):
            out.append(json.dumps(o))
        elif isinstance(o, float):
            out.append(fmt_float(o))
        elif isinstance(o, Fraction):
            out.append(json.dumps(o.numerator) if o.denominator == 1 else json.dumps(format_fraction(o)))
        elif isinstance(o, dict):
            if not o:
                out.append("{}")
                return
            out.append("{\n")
            for k, (key, val) in enumerate(o.items()):
                out.append(pad + json.dumps(str(key)) + ": ")
                emit(val, depth + 1)
                out.append(",\n" if k < len(o) - 1 else "\n")
            out.append(end + "}")
        elif isinstance(o, (list, tuple)):
            if not o:
                out.append("[]")
                return
            out.append("[\n")
            for k, val in enumerate(o):
                out.append(pad)
                emit(val, depth + 1)
                out.append(",\n" if k < len(o) - 1 else "\n")
            out.append(end + "]")
        else:
            raise TypeError(f"cannot serialize {type(o).__name__}")

    emit(obj, 0)
    return "".join(out) + "\n"


def csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt_float(x) if isinstance(x, float) else
                    format_fraction(x) if isinstance(x, Fraction) else x for x in r])
    return buf.getvalue()


# -- configuration -------------------------------------------------------------

@dataclass
class RunConfig:
    genus: int = 2
    tolerances: dict[str, float] = field(default_factory=dict)
    radius_doublings_cap: int = 4
    class_budget: int = 100_000
    seed: int = 20240607
    matrices: str | None = None      # None selects the standard representation
    threads: int = 1

    def validate(self) -> "RunConfig":
        if self.genus < 2:
            raise UsageError("genus must be at least 2")
        if self.radius_doublings_cap < 1 or self.class_budget < 1 or self.threads < 1:
            raise UsageError("caps, budgets and thread counts must be positive")
        unknown = sorted(set(self.tolerances) - set(TOLERANCE_NAMES))
        if unknown:
            raise UsageError(f"unknown tolerance names: {', '.join(unknown)}")
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError("seed must fit in 64 unsigned bits")
        return self

    def search_options(self) -> SearchOptions:
        return SearchOptions(initial_margin=float(self.tolerances.get("initial_margin", 0.5)),
                             doublings_cap=self.radius_doublings_cap)


def load_config(path: str | None) -> RunConfig:
    """Read the config file; the schema mirrors the RunConfig fields."""
    cfg = RunConfig()
    if path is None:
        return cfg
    data = load_json(path)
    if not isinstance(data, dict):
        raise errors.ParseError(f"{path}: config must be a JSON object")
    known = {"genus", "tolerances", "radius_doublings_cap", "class_budget", "seed", "rep_source", "threads"}
    extra = sorted(set(data) - known)
    if extra:
        raise UsageError(f"unknown config keys: {', '.join(extra)}")
    try:
        for key in ("genus", "radius_doublings_cap", "class_budget", "seed", "threads"):
            if key in data:
                setattr(cfg, key, int(data[key]))
        if "tolerances" in data:
            cfg.tolerances = {str(k): float(v) for k, v in dict(data["tolerances"]).items()}
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad config value: {exc}") from exc
    src = data.get("rep_source", "standard")
    if src != "standard":
        if not isinstance(src, dict) or "matrices" not in src:
            raise UsageError('rep_source must be "standard" or {"matrices": <path>}')
        base = Path(path).parent
        cfg.matrices = str(base / src["matrices"])
    return cfg


def load_json(path: str) -> Any:
    text = read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.ParseError(f"{path}: {exc.msg}", exc.lineno, exc.colno) from exc


def read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc


_NUMBER = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def parse_matrix_file(text: str, genus: int) -> list[tuple[float, float, float, float]]:
    """Whitespace-separated 2x2 blocks, row by row; ``#`` starts a comment."""
    values: list[float] = []
    for ln, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        for m in re.finditer(r"\S+", body):
            tok = m.group()
            if not _NUMBER.match(tok):
                raise errors.ParseError(f"not a number: {tok!r}", ln, m.start() + 1)
            values.append(float(tok))
    need = 8 * genus
    if len(values) != need:
        raise errors.ParseError(f"expected {need} numbers for genus {genus}, found {len(values)}")
    return [tuple(values[4 * k:4 * k + 4]) for k in range(2 * genus)]  # type: ignore[misc]


def build_rep(cfg: RunConfig) -> FuchsianRep:
    if cfg.matrices is None:
        return standard_rep(cfg.genus)
    mats = parse_matrix_file(read_text(cfg.matrices), cfg.genus)
    return rep_from_matrices(cfg.genus, mats)


def load_current(path: str, genus: int) -> WeightedCurrent:
    data = load_json(path)
    alpha = WeightedCurrent.from_dict(data, genus)
    if alpha.genus != genus:
        raise UsageError(f"current has genus {alpha.genus} but the run uses genus {genus}")
    return alpha


def load_sequence(path: str, genus: int) -> list[WeightedCurrent]:
    data = load_json(path)
    if not isinstance(data, list):
        raise errors.ParseError(f"{path}: sequence file must hold a JSON list of currents", 1, 1)
    out = []
    for k, item in enumerate(data):
        try:
            out.append(WeightedCurrent.from_dict(item, genus))
        except errors.ParseError as exc:
            raise errors.ParseError(f"{path}: entry {k}: {exc}") from exc
    return out


def current_class(text: str, genus: int) -> ConjugacyClass:
    return ConjugacyClass.parse(text, genus)


# -- subcommands ---------------------------------------------------------------

@dataclass
class Result:
    doc: Any
    code: int = EXIT_OK
    csv: str | None = None


def cmd_rep(cfg: RunConfig, args: argparse.Namespace) -> Result:
    rep = build_rep(cfg)
    gens = []
    for k, g in enumerate(rep.generators):
        gens.append({"name": letter_name(k + 1), "matrix": [g.a, g.b, g.c, g.d],
                     "trace": g.trace, "translation_length": translation_length(g)})
    return Result({"genus": rep.genus,
                   "source": "standard" if cfg.matrices is None else "matrices",
                   "generators": gens,
                   "relator_residual": relator_residual(rep.generators, rep.genus),
                   "covering_radius": rep.covering_radius})


def _classes(cfg: RunConfig, L: int) -> list[ConjugacyClass]:
    classes = enumerate_classes(cfg.genus, L)
    if len(classes) > cfg.class_budget:
        raise errors.BudgetExceeded(f"{len(classes)} classes exceed the class budget {cfg.class_budget}")
    return classes


def cmd_classes(cfg: RunConfig, args: argparse.Namespace) -> Result:
    rep = build_rep(cfg)
    classes = _classes(cfg, args.max_len)
    rows = [(str(c), c.length, pair_with_hyperbolic(c, rep)) for c in classes]
    doc = {"genus": cfg.genus, "max_len": args.max_len, "count": len(rows),
           "classes": [{"word": w, "length": n, "hyperbolic_length": h} for w, n, h in rows]}
    return Result(doc, csv=csv_text(["word", "length", "hyperbolic_length"], rows))


def cmd_length(cfg: RunConfig, args: argparse.Namespace) -> Result:
    rep = build_rep(cfg)
    c = current_class(args.word, cfg.genus)
    g = evaluate(rep, c.word)
    geo = class_geometry(rep, c.word)
    doc: dict[str, Any] = {"class": str(c), "word_length": c.length, "trace": abs(g.trace),
                           "hyperbolic_length": geo.length}
    if args.current:
        alpha = load_current(args.current, cfg.genus)
        res = intersection_number(alpha, c, rep, cfg.search_options())
        doc["current"] = alpha.to_dict()
        doc["cubical_length"] = res.value
        doc["stabilized"] = res.stabilized
        return Result(doc, EXIT_OK if res.stabilized else EXIT_NOT_STABILIZED)
    return Result(doc)


def cmd_intersect(cfg: RunConfig, args: argparse.Namespace) -> Result:
    rep = build_rep(cfg)
    alpha = load_current(args.current, cfg.genus)
    c = current_class(args.word, cfg.genus)
    res = intersection_number(alpha, c, rep, cfg.search_options())
    doc = {"current": alpha.to_dict(), "class": str(c), "value": res.value,
           "stabilized": res.stabilized, "radius": res.radius_used,
           "witnesses": [w.to_json() for w in res.witnesses]}
    return Result(doc, EXIT_OK if res.stabilized else EXIT_NOT_STABILIZED)


def cmd_cubulate(cfg: RunConfig, args: argparse.Namespace) -> Result:
    rep = build_rep(cfg)
    alpha = load_current(args.current, cfg.genus)
    c = current_class(args.word, cfg.genus)
    walls = build_wall_set(alpha, c, args.N, rep, cfg.search_options())
    if not walls:
        return Result({"current": alpha.to_dict(), "class": str(c), "N": args.N, "walls": [],
                       "vertices": [0], "edges": [], "max_cube_dimension": 0})
    # walls live in the frame of the axis of c: anchor at i, repelling end at 0
    frag = sageev_fragment(walls, rep, toward=BoundaryPoint.finite(0.0), max_vertices=args.max_vertices,
                           region=f"{c}^{args.N}")
    dim = max_cube_dimension(frag)
    doc = {"current": alpha.to_dict(), "class": str(c), "N": args.N}
    doc.update(frag.to_json())
    doc["max_cube_dimension"] = dim.value
    doc["dimension_exact"] = dim.exact
    return Result(doc)


def cmd_duality(cfg: RunConfig, args: argparse.Namespace) -> Result:
    rep = build_rep(cfg)
    alpha = load_current(args.current, cfg.genus)
    c = current_class(args.word, cfg.genus)
    report = verify_duality(alpha, c, args.N, rep, cfg.search_options())
    return Result(report.to_json(), EXIT_OK if report.passed else EXIT_CHECK_FAILED)


def _comparison_json(comp) -> dict:
    if comp is None:
        return {"exp_delta": None}
    return {"exp_delta": comp.exp_delta, "infinite": comp.infinite,
            "sup_forward": comp.sup_forward,
            "witness_forward": str(comp.witness_forward) if comp.witness_forward else None,
            "sup_backward": comp.sup_backward,
            "witness_backward": str(comp.witness_backward) if comp.witness_backward else None,
            "zero_witnesses": [str(z) for z in comp.zero_witnesses]}


def cmd_approx(cfg: RunConfig, args: argparse.Namespace) -> Result:
    rep = build_rep(cfg)
    opts = cfg.search_options()
    _classes(cfg, args.L)
    if args.builtin:
        seq = builtin_sequence(rep, args.L, args.count, cfg.seed, opts)
    else:
        seq = load_sequence(args.sequence, cfg.genus)
    rows = approximation_experiment(rep, seq, args.L, opts)
    table = []
    csv_rows = []
    for r in rows:
        entry = {"index": r.index, "current": r.current.to_dict(), "filling": r.filling_ok,
                 "stabilized": r.stabilized_all}
        entry.update(_comparison_json(r.comparison))
        if r.error:
            entry["error"] = r.error
        table.append(entry)
        comp = r.comparison
        csv_rows.append((r.index, " + ".join(str(c) for c, _ in r.current.atoms), r.filling_ok,
                         comp.exp_delta if comp else "",
                         str(comp.witness_forward) if comp and comp.witness_forward else "",
                         str(comp.witness_backward) if comp and comp.witness_backward else "",
                         r.stabilized_all))
    doc = {"genus": cfg.genus, "L": args.L, "seed": cfg.seed if args.builtin else None,
           "source": "builtin" if args.builtin else "file", "rows": table}
    return Result(doc, csv=csv_text(["index", "atom_words", "filling_ok", "exp_delta_L", "witness_forward",
                                    "witness_backward", "stabilized_all"], csv_rows))


def cmd_spectrum(cfg: RunConfig, args: argparse.Namespace) -> Result:
    rep = build_rep(cfg)
    _classes(cfg, args.L)
    if args.current:
        alpha = load_current(args.current, cfg.genus)
        s = spectrum((alpha, rep), args.L, cfg.search_options(), cfg.threads)
    else:
        s = spectrum(rep, args.L)
    doc: dict[str, Any] = {"label": s.label, "L": s.L,
                           "entries": [{"class": str(c), "value": v} for c, v in s.entries]}
    tol = float(cfg.tolerances.get("nondiscrete_tol", 1e-6))
    try:
        nd = nondiscreteness_check(s, tol=tol)
        doc["nondiscreteness"] = {"pairs_tested": nd.pairs_tested, "witness_count": len(nd.witnesses),
                                  "first_witness": ([str(nd.witnesses[0][0]), str(nd.witnesses[0][1]),
                                                     nd.witnesses[0][2]] if nd.found else None)}
    except ValueError:
        doc["nondiscreteness"] = None
    if args.current:
        doc["comparison"] = _comparison_json(delta_estimate(hyperbolic_spectrum(rep, args.L), s))
    rows = [(str(c), v) for c, v in s.entries]
    return Result(doc, csv=csv_text(["class", "value"], rows))


# -- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubecurrents",
                                description="Cubulations of surface groups from geodesic currents.")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--genus", type=int)
    p.add_argument("--matrices", help="generator matrix file (overrides the standard representation)")
    p.add_argument("--doublings-cap", type=int, dest="doublings_cap")
    p.add_argument("--class-budget", type=int, dest="class_budget")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                   help=f"tolerance override, one of {', '.join(TOLERANCE_NAMES)}")
    p.add_argument("--threads", type=int)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--csv", help="also write the table as CSV (table commands)")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("rep", help="generator matrices, traces and relator residual")
    s = sub.add_parser("classes", help="enumerate primitive classes up to a word length")
    s.add_argument("--max-len", type=int, default=3, dest="max_len")
    s = sub.add_parser("length", help="hyperbolic (and optionally cubical) length of a class")
    s.add_argument("word")
    s.add_argument("--current")
    for name, helptext in (("intersect", "intersection number of a current with a class"),
                           ("cubulate", "export the dual cube complex fragment along a class"),
                           ("duality", "check wall separation against N times the intersection number")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--current", required=True)
        s.add_argument("word")
        if name != "intersect":
            s.add_argument("--N", type=int, default=2)
        if name == "cubulate":
            s.add_argument("--max-vertices", type=int, default=4096, dest="max_vertices")
    s = sub.add_parser("approx", help="approximation experiment against the hyperbolic spectrum")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--sequence")
    g.add_argument("--builtin", action="store_true")
    s.add_argument("--L", type=int, default=4)
    s.add_argument("--count", type=int, default=5)
    s = sub.add_parser("spectrum", help="hyperbolic or cubical length spectrum up to length L")
    s.add_argument("--current")
    s.add_argument("--L", type=int, default=3)
    return p


COMMANDS: dict[str, Callable[[RunConfig, argparse.Namespace], Result]] = {
    "rep": cmd_rep, "classes": cmd_classes, "length": cmd_length, "intersect": cmd_intersect,
    "cubulate": cmd_cubulate, "duality": cmd_duality, "approx": cmd_approx, "spectrum": cmd_spectrum,
}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config)
    overrides = {"genus": args.genus, "radius_doublings_cap": args.doublings_cap,
                 "class_budget": args.class_budget, "seed": args.seed, "threads": args.threads}
    cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    if args.matrices:
        cfg.matrices = args.matrices
    for item in args.tol:
        name, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            cfg.tolerances[name] = float(val)
        except ValueError as exc:
            raise UsageError(f"bad tolerance value {val!r}") from exc
    return cfg.validate()


def _output_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    return p if p.is_absolute() or not base else Path(base) / p


def _write(path: str, text: str) -> None:
    target = _output_path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {target}: {exc.strerror}") from exc


def _error_code(exc: BaseException) -> int:
    table = [(errors.ParseError, EXIT_PARSE), (errors.RelatorCheckFailed, EXIT_RELATOR),
             (errors.NotStabilized, EXIT_NOT_STABILIZED), (errors.BudgetExceeded, EXIT_BUDGET),
             (errors.AmbiguousAxes, EXIT_AMBIGUOUS), (errors.CubeCurrentsError, EXIT_REJECTED),
             (UsageError, EXIT_USAGE), (OSError, EXIT_IO), (ValueError, EXIT_REJECTED)]
    for cls, code in table:
        if isinstance(exc, cls):
            return code
    raise exc


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        result = COMMANDS[args.command](cfg, args)
        text = dumps(result.doc)
        if args.out:
            _write(args.out, text)
        else:
            sys.stdout.write(text)
        if args.csv:
            if result.csv is None:
                raise UsageError(f"{args.command} has no table output")
            _write(args.csv, result.csv)
        return result.code
    except (errors.CubeCurrentsError, UsageError, OSError, ValueError) as exc:
        code = _error_code(exc)
        sys.stderr.write(dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}))
        return code


if __name__ == "__main__":
    sys.exit(main())
