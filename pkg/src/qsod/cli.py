"""Command-line front end: ``qsod <command> CONFIG [options]``.

Exit codes: 0 success, 1 failed invariant or reported violations, 2 unreadable input.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import bwb, presets
from .polytope import WeightPolytope
from .ratlin import CapacityError, fmt, fmt_vec, rat, sub, vec
from .root_datum import RootDatum, RootDatumError, gl_datum, levi, levi_data, rho, torus_datum
from .sod import (
    ConfigError,
    CoverageError,
    DisjointnessError,
    QuadraticNorm,
    SODConfig,
    Window,
    config_problems,
    enumerate_summands,
    locate,
    verify_windows,
    window,
)
from .weights import SignedWeightMultiset, adjoint_weights

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


class ParseError(ValueError):
    pass


# --- config loading --------------------------------------------------------------


def _vector(raw, n: Optional[int] = None, what: str = "vector") -> Tuple[Fraction, ...]:
    if isinstance(raw, str):
        raw = [x for x in raw.strip().strip("()").split(",") if x.strip()]
    if not isinstance(raw, (list, tuple)):
        raise ParseError(f"{what}: expected a list of rationals")
    try:
        v = tuple(rat(x) if not isinstance(x, float) else _no_float(x) for x in raw)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParseError(f"{what}: {exc}") from exc
    if n is not None and len(v) != n:
        raise ParseError(f"{what}: expected {n} entries, got {len(v)}")
    return v


def _no_float(x):
    raise TypeError(f"{x!r} is a float; write rationals as integers or strings like \"1/2\"")


def _root_datum(raw) -> RootDatum:
    if not isinstance(raw, dict):
        raise ParseError("root_datum: expected an object")
    if "gl" in raw:
        dims = raw["gl"] if isinstance(raw["gl"], list) else [raw["gl"]]
        return gl_datum(*(int(d) for d in dims))
    if "torus" in raw:
        return torus_datum(int(raw["torus"]))
    if "rank" in raw:
        n = int(raw["rank"])
        roots = [_vector(r, n, "root") for r in raw.get("roots", [])]
        coroots = [_vector(c, n, "coroot") for c in raw.get("coroots", [])]
        positive = raw.get("positive")
        return RootDatum.build(n, roots, coroots, positive)
    raise ParseError("root_datum: give one of 'gl', 'torus' or 'rank'")


def _representation(raw, rd: RootDatum) -> SignedWeightMultiset:
    n = rd.rank
    entries, adjoint = [], 0
    if isinstance(raw, dict):
        adjoint = int(raw.get("adjoint", 0))
        raw = raw.get("weights", [])
    if not isinstance(raw, list):
        raise ParseError("representation: expected a list of [weight, multiplicity] pairs")
    for item in raw:
        if isinstance(item, dict):
            w, m = item.get("weight"), item.get("mult", 1)
        elif isinstance(item, list) and len(item) == 2 and isinstance(item[0], list):
            w, m = item
        else:
            w, m = item, 1
        v = _vector(w, n, "weight")
        if any(x.denominator != 1 for x in v):
            raise ParseError(f"representation: weight {fmt_vec(v)} is not integral")
        entries.append((tuple(int(x) for x in v), int(m)))
    V = SignedWeightMultiset.from_list(n, entries)
    if adjoint:
        V = V + adjoint_weights(rd, adjoint)
    return V


def _from_preset(raw) -> Tuple[SODConfig, Optional[presets.QuiverSpec]]:
    if not isinstance(raw, dict) or "name" not in raw:
        raise ParseError("preset: expected an object with a 'name'")
    name = raw["name"]
    if name == "quiver":
        spec = presets.quiver_spec_from(raw)
        return presets.quiver_config(spec), spec
    if name == "loop-quiver":
        spec = presets.QuiverSpec.loops(
            int(raw["m"]), int(raw["d"]), rat(str(raw.get("delta", 0))), bool(raw.get("preprojective", False))
        )
        return presets.quiver_config(spec), spec
    if name not in presets.PRESETS:
        raise ParseError(f"preset: unknown name {name!r}")
    return presets.PRESETS[name](raw), None


class Loaded:
    def __init__(self, cfg: SODConfig, raw: dict, spec: Optional[presets.QuiverSpec]):
        self.cfg = cfg
        self.raw = raw
        self.spec = spec
        self.options = raw.get("options", {}) or {}

    def radius(self, override: Optional[str]) -> Fraction:
        value = override if override is not None else self.raw.get("radius")
        if value is None:
            raise ParseError("radius: not given in the config or on the command line")
        r = rat(str(value))
        if r <= 0:
            raise ParseError("radius: must be positive")
        return r


def load_config(path: str) -> Loaded:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("config: top level must be an object")
    try:
        if "preset" in raw:
            cfg, spec = _from_preset(raw["preset"])
            return Loaded(cfg, raw, spec)
        if "root_datum" not in raw:
            raise ParseError("config: needs 'root_datum' or 'preset'")
        rd = _root_datum(raw["root_datum"])
        V = _representation(raw.get("representation", []), rd)
        n = rd.rank
        q = QuadraticNorm.standard(n)
        if "q_matrix" in raw:
            rows = raw["q_matrix"]
            if not isinstance(rows, list) or len(rows) != n:
                raise ParseError(f"q_matrix: expected {n} rows")
            q = QuadraticNorm(tuple(_vector(r, n, "q_matrix row") for r in rows))
        delta = _vector(raw.get("delta", [0] * n), n, "delta")
        extra = int(raw.get("options", {}).get("extra_adjoint", 0)) if isinstance(raw.get("options"), dict) else 0
        return Loaded(SODConfig(rd, V, q, delta, extra), raw, None)
    except presets.QuiverRejected:
        raise
    except (RootDatumError, ConfigError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"config: {exc}") from exc


# --- emitters ----------------------------------------------------------------------


def _csv(rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _points(points) -> str:
    return ";".join(fmt_vec(vec(p)) for p in points)


SUMMAND_COLUMNS = ("lambda", "norm_sq", "delta_lambda", "central_weight", "n_dominant", "points")


def summand_rows(windows: Sequence[Window]) -> List[List[str]]:
    return [
        [
            fmt_vec(W.lam.lam),
            fmt(W.lam.norm_sq),
            fmt_vec(W.centre),
            fmt_vec(W.central_weight),
            str(len(W.dominant_points)),
            _points(W.dominant_points),
        ]
        for W in windows
    ]


def summand_json(windows: Sequence[Window], radius: Fraction) -> str:
    body = {
        "radius": fmt(radius),
        "summands": [dict(zip(SUMMAND_COLUMNS, row)) for row in summand_rows(windows)],
    }
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


_PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
)


def _hull(points):
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def summand_svg(windows: Sequence[Window], radius: Fraction, marks: Sequence[Sequence[int]] = (), unit: int = 40) -> str:
    """Character lattice in the box |x|, |y| <= radius with one colour per cell.

    Lattice units, y pointing up.  Cells with three or more non-collinear points
    are drawn as filled hulls, segments as lines, single points as dots; weights
    passed in ``marks`` are drawn as crosses.
    """
    R = int(radius)
    size = (2 * R + 2) * unit

    def X(x):
        return (x + R + 1) * unit

    def Y(y):
        return (R + 1 - y) * unit

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>',
        f'<line x1="{X(-R)}" y1="{Y(0)}" x2="{X(R)}" y2="{Y(0)}" stroke="#cccccc"/>',
        f'<line x1="{X(0)}" y1="{Y(-R)}" x2="{X(0)}" y2="{Y(R)}" stroke="#cccccc"/>',
    ]
    for x, y in itertools.product(range(-R, R + 1), repeat=2):
        out.append(f'<circle cx="{X(x)}" cy="{Y(y)}" r="2" fill="#999999"/>')
    for k, W in enumerate(windows):
        colour = _PALETTE[k % len(_PALETTE)]
        pts = [tuple(p) for p in W.dominant_points]
        hull = _hull(pts)
        label = fmt_vec(W.lam.lam)
        out.append(f'<g class="cell" data-lambda="{label}">')
        if len(hull) >= 3:
            path = " ".join(f"{X(x)},{Y(y)}" for x, y in hull)
            out.append(f'<polygon points="{path}" fill="{colour}" fill-opacity="0.35" stroke="{colour}"/>')
        elif len(hull) == 2:
            (x1, y1), (x2, y2) = hull
            out.append(f'<line x1="{X(x1)}" y1="{Y(y1)}" x2="{X(x2)}" y2="{Y(y2)}" stroke="{colour}" stroke-width="4"/>')
        for x, y in pts:
            out.append(f'<circle cx="{X(x)}" cy="{Y(y)}" r="6" fill="{colour}"/>')
        out.append("</g>")
    half = unit // 6
    for m in marks:
        x, y = int(m[0]), int(m[1])
        out.append(
            f'<path d="M{X(x) - half},{Y(y) - half} L{X(x) + half},{Y(y) + half} '
            f'M{X(x) - half},{Y(y) + half} L{X(x) + half},{Y(y) - half}" stroke="#000000" stroke-width="2"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# --- commands ----------------------------------------------------------------------


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require_valid(loaded: Loaded) -> Optional[str]:
    problems = config_problems(loaded.cfg)
    return problems[0] if problems else None


def cmd_check(loaded: Loaded, args) -> int:
    problems = config_problems(loaded.cfg)
    if problems:
        _emit(f"FAIL {problems[0]}\n", args.out)
        return EXIT_FAIL
    _emit("PASS all load-time invariants hold\n", args.out)
    return EXIT_OK


def cmd_polytope(loaded: Loaded, args) -> int:
    cfg = loaded.cfg
    if args.lam is not None:
        W = window(cfg, _vector(args.lam, cfg.rd.rank, "--lam"))
        fixed, centre, points = W.lam.fixed_V, W.centre, W.cell_points
    else:
        fixed, centre = cfg.VG, cfg.delta
        points = tuple(WeightPolytope(fixed).lattice_points(centre))
    P = WeightPolytope(fixed)
    rows = [["kind", "value", "upper_support"]]
    rows += [["ray", fmt_vec(vec(r)), fmt(P.upper_support(r))] for r in P.rays]
    rows += [["shift", fmt_vec(centre), ""]]
    rows += [["point", fmt_vec(vec(p)), ""] for p in points]
    _emit(_csv(rows), args.out)
    return EXIT_OK


def cmd_locate(loaded: Loaded, args) -> int:
    cfg = loaded.cfg
    w = _vector(args.weight, cfg.rd.rank, "--weight")
    data = locate(cfg, w)
    rows = [["weight", "lambda", "norm_sq", "delta_lambda"], [fmt_vec(w), fmt_vec(data.lam), fmt(data.norm_sq), fmt_vec(data.delta_lambda)]]
    _emit(_csv(rows), args.out)
    return EXIT_OK


def cmd_enumerate(loaded: Loaded, args) -> int:
    cfg = loaded.cfg
    radius = loaded.radius(args.radius)
    windows = enumerate_summands(cfg, radius)
    if args.format == "json":
        _emit(summand_json(windows, radius), args.out)
    elif args.format == "svg":
        if cfg.rd.rank != 2:
            sys.stderr.write(f"notice: SVG is drawn for rank 2 only; rank is {cfg.rd.rank}, writing the table\n")
            _emit(_csv([list(SUMMAND_COLUMNS)] + summand_rows(windows)), args.out)
        else:
            marks = sorted(cfg.V.nonzero_support())
            _emit(summand_svg(windows, radius, marks), args.out)
    else:
        _emit(_csv([list(SUMMAND_COLUMNS)] + summand_rows(windows)), args.out)
    return EXIT_OK


def cmd_bwb(loaded: Loaded, args) -> int:
    cfg = loaded.cfg
    lam = _vector(args.lam, cfg.rd.rank, "--lam")
    w = _vector(args.weight, cfg.rd.rank, "--weight")
    pres = bwb.bwb_presentation(cfg, lam, w)
    rows = [["weight", "shift", "multiplicity"]]
    rows += [[fmt_vec(t.weight), str(t.shift), str(t.multiplicity)] for t in pres.terms]
    rows += [["dropped", "", str(pres.dropped)]]
    _emit(_csv(rows), args.out)
    return EXIT_OK


def cmd_verify(loaded: Loaded, args) -> int:
    cfg = loaded.cfg
    radius = loaded.radius(args.radius)
    windows = enumerate_summands(cfg, radius)
    offset = loaded.options.get("offset")
    if offset is not None:
        # negative control: shift every nonzero window away from its true centre
        shift = _vector(offset, cfg.rd.rank, "options.offset")
        windows = [window(cfg, W.lam.lam, shift) for W in windows]
    samples = args.samples if args.samples is not None else loaded.options.get("samples")
    report = verify_windows(cfg, windows, samples, args.seed)
    rows = [["check", "lambda", "lambda_prime", "checked", "violations", "min_margin"]]
    for kind, reports in (("semiorthogonality", report.semiorthogonality), ("full_faithfulness", report.full_faithfulness)):
        for r in reports:
            rows.append([
                kind, fmt_vec(r.lam), fmt_vec(r.lam_prime), str(r.checked), str(len(r.violations)),
                "" if r.min_margin is None else fmt(r.min_margin),
            ])
    for r in report.semiorthogonality + report.full_faithfulness:
        for v in r.violations:
            rows.append([
                "violation", fmt_vec(r.lam), fmt_vec(r.lam_prime),
                f"w={fmt_vec(vec(v.w))} v_J={fmt_vec(v.v_J)} induced={fmt_vec(v.induced)} w'={fmt_vec(vec(v.w_prime))}",
                "1", fmt(v.margin),
            ])
    rows.append(["total", "", "", "", str(report.violations), ""])
    _emit(_csv(rows), args.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_quiver(loaded: Loaded, args) -> int:
    spec = loaded.spec
    if spec is None:
        raise ParseError("quiver: the config must use the 'quiver' or 'loop-quiver' preset")
    radius = loaded.radius(args.radius)
    rows = [["partition", "sort_key", "lambda", "delta_labels", "window_sizes"]]
    for p in presets.enumerate_partitions(spec, radius):
        labels = presets.quiver_delta_labels(spec, p)
        sizes = []
        for (dj, _), centre in zip(p.blocks, labels):
            block = presets.quiver_config(spec, dj)
            pts = WeightPolytope(block.VG).lattice_points(centre)
            sizes.append(sum(1 for x in pts if block.rd.is_dominant(vec(x))))
        rows.append([
            " + ".join(f"{fmt_vec(vec(d))}:{fmt(w)}" for d, w in p.blocks),
            fmt(presets.quiver_sort_key(p)),
            fmt_vec(presets.block_cocharacter(spec, p)),
            ";".join(fmt_vec(x) for x in labels),
            ";".join(str(s) for s in sizes),
        ])
    _emit(_csv(rows), args.out)
    return EXIT_OK


def cmd_levis(loaded: Loaded, args) -> int:
    rd = loaded.cfg.rd
    rows = [["simple_subset", "levi_roots", "rho_G_minus_rho_L", "label"]]
    rho_G = rho(rd)
    kappa = rat(args.kappa) if args.kappa is not None else None
    w = _vector(args.weight, rd.rank, "--weight") if args.weight is not None else None
    for k in range(len(rd.simple) + 1):
        for subset in itertools.combinations(range(len(rd.simple)), k):
            lv = levi(rd, subset)
            rho_L, _ = levi_data(rd, lv)
            label = ""
            if kappa is not None and w is not None:
                try:
                    label = fmt_vec(presets.curve_labels(rd, kappa, lv, w))
                except presets.LabelRejected as exc:
                    label = f"rejected: {exc}"
            rows.append([
                "{" + ",".join(str(i) for i in subset) + "}",
                ";".join(fmt_vec(rd.roots[i]) for i in lv.levi_roots),
                fmt_vec(sub(rho_G, rho_L)),
                label,
            ])
    _emit(_csv(rows), args.out)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "polytope": cmd_polytope,
    "locate": cmd_locate,
    "enumerate": cmd_enumerate,
    "bwb": cmd_bwb,
    "verify": cmd_verify,
    "quiver": cmd_quiver,
    "levis": cmd_levis,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsod", description="Windows and summands of quasi-symmetric quotient stacks.")
    sub_parsers = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub_parsers.add_parser(name)
        p.add_argument("config", help="JSON configuration file")
        p.add_argument("--radius", help="box radius for enumeration (overrides the config)")
        p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
        p.add_argument("--samples", type=int, help="sample this many generators per window")
        p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
        p.add_argument("--out", help="write here instead of stdout")
        p.add_argument("--weight", help="weight such as 3,0 or -1/2,1/2")
        p.add_argument("--lam", help="cocharacter such as -8/5,4/5")
        p.add_argument("--kappa", help="coefficient of rho_G - rho_L for curve labels")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        loaded = load_config(args.config)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except presets.QuiverRejected as exc:
        _emit(f"FAIL {exc}\n", args.out if args.command == "check" else None)
        return EXIT_FAIL
    if args.command not in ("check", "levis"):
        problem = _require_valid(loaded)
        if problem is not None:
            sys.stderr.write(f"invalid config: {problem}\n")
            return EXIT_FAIL
    try:
        return COMMANDS[args.command](loaded, args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (CoverageError, DisjointnessError, CapacityError, ValueError) as exc:
        sys.stderr.write(f"failed: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
