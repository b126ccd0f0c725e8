"""Command-line front end: ``cutseq <command> ...``.

Exit status is 0 for accepted or consistent input, 1 for a rejection or a
cone point hit, and 2 for malformed input or flags.  Every command accepts
``--format json`` and then prints a single JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .algebra import QuadNum, parse_number, parse_point
from .characterize import (
    decide_parametric,
    decide_window,
    labels_determine_edges,
    combinatorial_lift,
)
from .errors import CutSeqError, SequenceFormatError, SurfaceFormatError
from .gamma import build_gamma, format_edges, gamma_record, is_strongly_connected
from .iet import (
    conjugated_iet,
    cylinder_length,
    format_iet,
    format_label,
    idoc_check,
    irreducibility_check,
    parse_label,
)
from .oracle import GeoState, Segment, trace
from .surface import (
    LabeledSeq,
    Surface,
    classify_squares,
    l_surface,
    parse_surface,
    quadrant_transform,
    six_square_example,
    torus,
)
from .torusword import EWord, classify_symmetry, derive_once, recover_cf, slope_params

BUILTINS: dict[str, Callable[[], Surface]] = {
    "torus": torus,
    "l-surface": l_surface,
    "six-squares": six_square_example,
}


@dataclass
class CliResult:
    code: int
    stdout: str
    stderr: str = ""


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # route argparse failures through our exit path
        raise _Usage(f"{self.prog}: {message}")


def _color(text: str, code: str, stream) -> str:
    if os.environ.get("NO_COLOR") is not None or not getattr(stream, "isatty", lambda: False)():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def _load_surface(spec: str) -> Surface:
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name not in BUILTINS:
            raise SurfaceFormatError(f"unknown builtin surface {name!r}; "
                                     f"choose from {', '.join(sorted(BUILTINS))}")
        return BUILTINS[name]()
    try:
        text = Path(spec).read_text()
    except OSError as exc:
        raise SurfaceFormatError(f"cannot read surface file {spec!r}: {exc.strerror}") from exc
    return parse_surface(text)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _lit(q: QuadNum) -> str:
    return q.to_literal()


# commands -------------------------------------------------------------------

def cmd_surface(args) -> tuple[int, dict, list[str]]:
    s = _load_surface(args.surface)
    good, bad = classify_squares(s)
    rec = {
        "d": s.d, "h": str(s.h), "v": str(s.v), "D": s.D, "transitive": True,
        "good": sorted(good), "bad": sorted(bad),
        "labels_determine_edges": labels_determine_edges(s),
    }
    lines = [f"d = {s.d}", f"h = {s.h}", f"v = {s.v}", f"D = {s.D}", "transitive: yes",
             f"good: {' '.join(map(str, sorted(good))) or '-'}",
             f"bad: {' '.join(map(str, sorted(bad))) or '-'}",
             f"labels determine edges: {'yes' if rec['labels_determine_edges'] else 'no'}"]
    return 0, rec, lines


def cmd_gamma(args) -> tuple[int, dict, list[str]]:
    s = _load_surface(args.surface)
    g = build_gamma(s, args.M)
    rec = gamma_record(g)
    lines = format_edges(g).splitlines()
    lines.append(f"strongly connected: {'yes' if is_strongly_connected(g) else 'no'}")
    return 0, rec, lines


def _segment_record(seg: Segment) -> dict:
    return {"square": seg.square, "from": [_lit(seg.x0), _lit(seg.y0)],
            "to": [_lit(seg.x1), _lit(seg.y1)]}


def cmd_trace(args) -> tuple[int, dict, list[str]]:
    s = _load_surface(args.surface)
    s = quadrant_transform(s, args.quadrant.upper())
    m = parse_number(args.slope)
    x, y = parse_point(args.start)
    res = trace(s, GeoState(args.square, x, y, m), args.n, args.corner.upper(),
                emit_segments=args.emit_segments)
    seq = " ".join(map(str, res.symbols))
    rec = {"symbols": seq, "eps": res.eps, "terminal": res.terminal,
           "hit_square": res.hit_square, "corners": [list(c) for c in res.corners]}
    lines = [seq, f"terminal: {res.terminal}"]
    if res.hit_square is not None:
        lines.append(f"hit square: {res.hit_square}")
    if args.emit_segments and res.segments is not None:
        rec["segments"] = [_segment_record(seg) for seg in res.segments]
        for seg in res.segments:
            lines.append(f"segment {seg.square} {_lit(seg.x0)} {_lit(seg.y0)} "
                         f"{_lit(seg.x1)} {_lit(seg.y1)}")
    return (1 if res.terminal == "singularity_hit" else 0), rec, lines


def _verdict_output(v) -> tuple[int, dict, list[str]]:
    rec = v.to_record()
    lines = [f"verdict: {v.kind}", f"reason: {v.reason}"]
    if v.position is not None:
        lines.append(f"position: {v.position}")
    if v.corner:
        lines.append("corner: " + " ".join(f"{k}={v.corner[k]}" for k in sorted(v.corner)))
    return (0 if v.accepted else 1), rec, lines


def cmd_validate(args) -> tuple[int, dict, list[str]]:
    s = _load_surface(args.surface)
    try:
        text = Path(args.seq).read_text() if args.seq != "-" else sys.stdin.read()
    except OSError as exc:
        raise SequenceFormatError(f"cannot read sequence file {args.seq!r}: {exc.strerror}")
    seq = LabeledSeq.parse(text)
    return _verdict_output(decide_window(seq, s))


def cmd_lift(args) -> tuple[int, dict, list[str]]:
    s = _load_surface(args.surface)
    seq = combinatorial_lift(EWord.parse(args.eps), args.lambda0, s)
    return 0, {"symbols": str(seq)}, [str(seq)]


def cmd_derive(args) -> tuple[int, dict, list[str]]:
    word = EWord.parse(args.eps)
    if args.full:
        steps = [word.letters]
        cur = word
        while True:
            try:
                cur = derive_once(cur)
            except CutSeqError:
                break
            steps.append(cur.letters)
        cf = recover_cf(word, args.k)
        rec = {"derivations": steps, "quotients": cf}
        return 0, rec, steps + ["quotients: " + " ".join(map(str, cf))]
    out = derive_once(word)
    return 0, {"derived": out.letters, "origin_index": out.origin_index}, [out.letters]


def cmd_symmetry(args) -> tuple[int, dict, list[str]]:
    v = classify_symmetry(EWord.parse(args.eps))
    rec = {"kind": v.kind, "center": v.center}
    line = v.kind if v.center is None else f"{v.kind} center={v.center}"
    return 0, rec, [line]


def cmd_iet(args) -> tuple[int, dict, list[str]]:
    s = _load_surface(args.surface)
    p = slope_params(parse_number(args.slope), s.D)
    spec = conjugated_iet(s, p)
    rec: dict = {"M_raw": p.M_raw, "M_mod": p.M_mod, "theta": _lit(p.theta),
                 "spec": format_iet(spec),
                 "irreducible": irreducibility_check(spec.pi0, spec.pi1),
                 "idoc": idoc_check(spec, args.idoc), "idoc_steps": args.idoc}
    lines = format_iet(spec).splitlines()
    lines += [f"M_raw: {p.M_raw}", f"M_mod: {p.M_mod}", f"theta: {_lit(p.theta)}",
              f"irreducible: {'yes' if rec['irreducible'] else 'no'}",
              f"idoc ({args.idoc} steps): {'yes' if rec['idoc'] else 'no'}"]
    cyl = {}
    for word in args.cylinder or []:
        labels = [parse_label(t) for t in word.replace(",", " ").split()]
        if any(lab not in spec.pi0 for lab in labels):
            raise SequenceFormatError(f"cylinder word {word!r} uses unknown labels")
        length = cylinder_length(spec, labels)
        key = " ".join(format_label(a) for a in labels)
        cyl[key] = _lit(length)
        lines.append(f"cylinder [{key}]: {_lit(length)}")
    if cyl:
        rec["cylinders"] = cyl
    return 0, rec, lines


def cmd_decide(args) -> tuple[int, dict, list[str]]:
    s = _load_surface(args.surface)
    v = decide_parametric(s, parse_number(args.slope), parse_point(args.start), args.lambda0,
                          args.corner.upper())
    return _verdict_output(v)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cutseq", description="Cutting sequences on square-tiled surfaces.")
    p.add_argument("--version", action="version", version=f"cutseq {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("plain", "json"), default="plain")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def surface_arg(sp, required=True):
        sp.add_argument("--surface", required=required,
                        help="surface file, or builtin:torus / builtin:l-surface / "
                             "builtin:six-squares")

    sp = sub.add_parser("surface", parents=[common], help="check a surface file")
    sp.add_argument("action", choices=("check",))
    surface_arg(sp)
    sp.set_defaults(func=cmd_surface)

    sp = sub.add_parser("gamma", parents=[common], help="transition graph for exponent M")
    surface_arg(sp)
    sp.add_argument("--M", type=_nonneg_int, required=True)
    sp.set_defaults(func=cmd_gamma)

    sp = sub.add_parser("trace", parents=[common], help="trace a line exactly")
    surface_arg(sp)
    sp.add_argument("--slope", required=True)
    sp.add_argument("--start", required=True, help="x,y in the number literal grammar")
    sp.add_argument("--square", type=_positive_int, required=True)
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--corner", choices=("hv", "vh", "HV", "VH"), default="hv")
    sp.add_argument("--quadrant", choices=("ne", "nw", "se", "sw", "NE", "NW", "SE", "SW"),
                    default="ne")
    sp.add_argument("--emit-segments", action="store_true")
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("validate", parents=[common], help="decide a finite window")
    surface_arg(sp)
    sp.add_argument("--seq", required=True, help="token file such as '2V 3H 2H', or -")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("lift", parents=[common], help="combinatorial lift of an H/V word")
    surface_arg(sp)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--lambda0", type=_positive_int, required=True)
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("derive", parents=[common], help="derive an H/V word")
    sp.add_argument("--eps", required=True)
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--once", action="store_true")
    mode.add_argument("--full", action="store_true")
    sp.add_argument("--k", type=_positive_int, default=64, help="max partial quotients")
    sp.set_defaults(func=cmd_derive)

    sp = sub.add_parser("symmetry", parents=[common], help="classify window symmetry")
    sp.add_argument("--eps", required=True)
    sp.set_defaults(func=cmd_symmetry)

    sp = sub.add_parser("iet", parents=[common], help="bottom-edge interval exchange")
    surface_arg(sp)
    sp.add_argument("--slope", required=True)
    sp.add_argument("--idoc", type=_positive_int, default=1000)
    sp.add_argument("--cylinder", action="append", help="word like '1L 2R'; repeatable")
    sp.set_defaults(func=cmd_iet)

    sp = sub.add_parser("decide", parents=[common], help="exact decision for a line")
    surface_arg(sp)
    sp.add_argument("--slope", required=True)
    sp.add_argument("--start", required=True)
    sp.add_argument("--lambda0", type=_positive_int, required=True)
    sp.add_argument("--corner", choices=("hv", "vh", "HV", "VH"), default="hv")
    sp.set_defaults(func=cmd_decide)
    return p


def run(argv: Sequence[str] | None = None, stdout_is_tty: bool = False) -> CliResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as exc:
        return CliResult(2, "", f"{exc}\n")
    except SystemExit as exc:  # --help and --version
        return CliResult(int(exc.code or 0), "", "")
    try:
        code, rec, lines = args.func(args)
    except (CutSeqError, ValueError) as exc:
        return CliResult(2, "", f"cutseq {args.command}: error: {exc}\n")
    if args.format == "json":
        rec = {"command": args.command, "exit_code": code, **rec}
        return CliResult(code, json.dumps(rec, sort_keys=True) + "\n")
    return CliResult(code, "\n".join(lines) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    result = run(argv)
    out = result.stdout
    if out.startswith("verdict: "):
        head, _, rest = out.partition("\n")
        out = _color(head, "1", sys.stdout) + "\n" + rest
    sys.stdout.write(out)
    sys.stderr.write(result.stderr)
    return result.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
