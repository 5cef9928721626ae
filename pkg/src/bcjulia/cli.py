"""``bcjulia`` command line: classify, orbit, render and verify.

Exit codes: 0 ok, 1 a verification suite failed, 2 bad input, 3 degenerate
polynomial, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from typing import Sequence

from bcjulia import core
from bcjulia.dynamics import BicomplexClass, IterParams, classify_bicomplex_detail, orbit_bicomplex, \
    require_nondegenerate
from bcjulia.errors import DegenerateError, ParseError
from bcjulia.poly import parse_bicomplex, parse_poly
from bcjulia.render import parse_axis

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_DEGENERATE, EXIT_IO = 0, 1, 2, 3, 4

CONFIG_KEYS = ("max_iter", "de_threshold", "escape_safety", "resolution", "window", "threads")
# options whose values may start with "-" (a window such as -1.5:1.5)
_VALUE_FLAGS = ("--window", "--camera", "--up")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_PARSE):
        super().__init__(message)
        self.code = code


# -- value parsers shared by flags and config --------------------------------

def _int(text: str, key: str, minimum: int = 1) -> int:
    try:
        v = int(text)
    except ValueError:
        raise ParseError(f"{key}: expected an integer, got {text!r}") from None
    if v < minimum:
        raise ParseError(f"{key}: must be >= {minimum}")
    return v


def _float(text: str, key: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"{key}: expected a number, got {text!r}") from None
    if not math.isfinite(v) or v <= 0:
        raise ParseError(f"{key}: must be a positive finite number")
    return v


def parse_resolution(text: str) -> tuple[int, ...]:
    return tuple(_int(t, "resolution", 2) for t in text.split(","))


def parse_window(text: str) -> tuple[tuple[float, float], ...]:
    out = []
    for part in text.split(","):
        lo, sep, hi = part.partition(":")
        try:
            a, b = float(lo), float(hi)
        except ValueError:
            raise ParseError(f"window: expected lo:hi, got {part!r}") from None
        if not sep or not a < b:
            raise ParseError(f"window: expected lo:hi with lo < hi, got {part!r}")
        out.append((a, b))
    return tuple(out)


def parse_triple(text: str, key: str) -> tuple[float, float, float]:
    try:
        v = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise ParseError(f"{key}: expected three comma-separated numbers, got {text!r}") from None
    if len(v) != 3:
        raise ParseError(f"{key}: expected three comma-separated numbers, got {text!r}")
    return v


def parse_colour(text: str, key: str) -> tuple[int, int, int]:
    try:
        v = tuple(int(t) for t in text.split(","))
    except ValueError:
        v = ()
    if len(v) != 3 or not all(0 <= x <= 255 for x in v):
        raise ParseError(f"{key}: expected r,g,b with values 0-255, got {text!r}")
    return v


def parse_slice(text: str) -> dict[str, float]:
    fixed = {}
    for part in text.split(","):
        axis, sep, value = part.partition("=")
        if not sep:
            raise ParseError(f"slice: expected axis=value, got {part!r}")
        try:
            fixed[parse_axis(axis)] = float(value)
        except ValueError as exc:
            raise ParseError(f"slice: {exc}") from None
    if not 1 <= len(fixed) <= 2:
        raise ParseError("slice: fix one axis (3-D) or two axes (2-D)")
    return fixed


# -- configuration -------------------------------------------------------------

@dataclass
class Settings:
    max_iter: int = 500
    de_threshold: float | None = None
    escape_safety: float = 1.0
    resolution: tuple[int, ...] = (65,)
    window: tuple[tuple[float, float], ...] = ((-1.5, 1.5),)
    threads: int | None = None
    palette: dict[BicomplexClass, tuple[int, int, int]] = field(default_factory=dict)

    def params(self, default_threshold: float = 1e-3) -> IterParams:
        thr = default_threshold if self.de_threshold is None else self.de_threshold
        return IterParams(max_iter=self.max_iter, de_threshold=thr, escape_safety=self.escape_safety)


def _convert(key: str, value: str):
    if key == "max_iter":
        return _int(value, key)
    if key in ("de_threshold", "escape_safety"):
        v = _float(value, key)
        if key == "escape_safety" and v < 1.0:
            raise ParseError("escape_safety: must be >= 1")
        return v
    if key == "resolution":
        return parse_resolution(value)
    if key == "window":
        return parse_window(value)
    if key == "threads":
        return _int(value, key)
    raise AssertionError(key)


def parse_config(text: str, source: str = "config") -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment.  Unknown keys are
    rejected by name."""
    values: dict = {}
    palette: dict[BicomplexClass, tuple[int, int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep:
            raise ParseError(f"{source}:{lineno}: expected key=value")
        if key.startswith("palette."):
            name = key[len("palette."):]
            try:
                cls = BicomplexClass[name]
            except KeyError:
                raise ParseError(f"{source}:{lineno}: unknown config key {key!r}") from None
            palette[cls] = parse_colour(value, key)
        elif key in CONFIG_KEYS:
            values[key] = _convert(key, value)
        else:
            raise ParseError(f"{source}:{lineno}: unknown config key {key!r}")
    if palette:
        values["palette"] = palette
    return values


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc.strerror or exc}", EXIT_IO) from exc
    return parse_config(text, path)


def resolve_settings(args: argparse.Namespace) -> Settings:
    """Defaults, overridden by the config file, overridden by flags."""
    s = Settings()
    if getattr(args, "config", None):
        for key, value in load_config(args.config).items():
            setattr(s, key, value)
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            setattr(s, key, flag)
    return s


# -- argument handling ---------------------------------------------------------

def _split_tokens(tokens: Sequence[str], keys: Sequence[str]) -> tuple[list[str], dict[str, str]]:
    poly, extra = [], {}
    for tok in tokens:
        k, sep, v = tok.partition("=")
        if sep and k in keys:
            extra[k] = v
        else:
            poly.append(tok)
    missing = [k for k in keys if k not in extra]
    if missing:
        raise ParseError(f"missing {', '.join(k + '=' for k in missing)}")
    return poly, extra


def _label(c) -> str:
    return c.name


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.6g}"


def cmd_classify(args, out) -> int:
    s = resolve_settings(args)
    tokens, extra = _split_tokens(args.spec, ("point",))
    P = parse_poly(tokens)
    w = parse_bicomplex(extra["point"])
    params = s.params()
    p1, p2 = require_nondegenerate(P, params.tol)
    cls, (c1, c2), (r1, r2) = classify_bicomplex_detail(P, w, params)
    print(f"proj1={p1} proj2={p2}", file=out)
    print(f"class={_label(cls)} c1={_label(c1)} c2={_label(c2)} "
          f"iters={r1.iters},{r2.iters} de={_fmt(r1.de)},{_fmt(r2.de)}", file=out)
    return EXIT_OK


def cmd_orbit(args, out) -> int:
    s = resolve_settings(args)
    tokens, extra = _split_tokens(args.spec, ("point", "n"))
    n = _int(extra["n"], "n")
    P = parse_poly(tokens)
    w = parse_bicomplex(extra["point"])
    params = s.params()
    require_nondegenerate(P, params.tol)
    print("# step w0 w1 w2 w3 norm", file=out)
    z = w
    for step in range(n):
        r = z.to_reals()
        print(f"{step} {r[0]!r} {r[1]!r} {r[2]!r} {r[3]!r} {core.norm(z)!r}", file=out)
        if step + 1 < n:
            try:
                z = P(z)
            except (ValueError, OverflowError):
                print(f"# orbit overflowed after step {step}", file=out)
                break
    escaped, iters = orbit_bicomplex(P, w, params)
    print(f"verdict={'escaped' if escaped else 'bounded'} iters={iters}", file=out)
    return EXIT_OK


_MODES = {"voxel": "voxel", "voxel-scan": "voxel", "image": "image",
          "raymarch": "raymarch", "ray-march": "raymarch"}


def cmd_render(args, out) -> int:
    from bcjulia import render

    s = resolve_settings(args)
    P = parse_poly(args.spec)
    fixed = parse_slice(args.slice)
    mode = _MODES[args.mode]
    ndim = 4 - len(fixed)
    if mode == "image" and ndim != 2:
        raise ParseError("--mode image needs a 2-D slice such as i2=0,j=0")
    if mode in ("voxel", "raymarch") and ndim != 3:
        raise ParseError(f"--mode {args.mode} needs a 3-D slice such as j=0")
    window = s.window if len(s.window) > 1 else s.window * ndim
    res = s.resolution if len(s.resolution) > 1 else s.resolution * ndim
    if len(window) != ndim or len(res) != ndim:
        raise ParseError(f"window and resolution need 1 or {ndim} entries")
    spec = render.SliceSpec.make(fixed, window, res)
    params = s.params()
    require_nondegenerate(P, params.tol)
    palette = dict(render.DEFAULT_PALETTE)
    palette.update(s.palette)

    if mode == "raymarch":
        opts = render.RenderOptions(
            mode="ray-march", palette=palette,
            direction=parse_triple(args.camera, "camera"), up=parse_triple(args.up, "up"))
        ray = render.raymarch_image(P, spec, opts, params, s.threads)
        render.emit_ppm(ray.image, args.output)
        counts = ray.counts()
        miss = int((ray.labels == render.MISS).sum())
        summary = " ".join(f"{c.name}={counts[c]}" for c in BicomplexClass) + f" miss={miss}"
    else:
        grid = render.classify_slice(P, spec, params, s.threads, s.de_threshold)
        if mode == "voxel":
            render.export_voxels(grid, args.output)
        else:
            render.emit_ppm(render.image_from_grid(grid, palette), args.output)
        counts = grid.counts()
        summary = " ".join(f"{c.name}={counts[c]}" for c in BicomplexClass)
    print(summary, file=out)
    print(f"wrote {args.output}", file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from bcjulia.verify import SUITES, run_suites

    names = args.suite or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ParseError(f"unknown suite {unknown[0]!r}; choose from {', '.join(SUITES)}")
    ok = True
    for res in run_suites(names, args.seed):
        print(res.line(), file=out)
        ok &= res.passed
    print("all suites passed" if ok else "some suites FAILED", file=out)
    return EXIT_OK if ok else EXIT_VERIFY


def _flag(key: str, convert=None):
    """argparse ``type=`` callable that reports our own error message."""
    def parse(text: str):
        try:
            return convert(text) if convert else _convert(key, text)
        except ParseError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    parse.__name__ = key
    return parse


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--max-iter", dest="max_iter", type=_flag("max_iter"))
    p.add_argument("--de-threshold", dest="de_threshold", type=_flag("de_threshold"))
    p.add_argument("--escape-safety", dest="escape_safety", type=_flag("escape_safety"))
    p.add_argument("--threads", type=_flag("threads"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bcjulia", description="Bicomplex Julia set tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify one point")
    p.add_argument("spec", nargs="+", help="polynomial tokens followed by point=<literal>")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("orbit", help="print an orbit")
    p.add_argument("spec", nargs="+", help="polynomial tokens, point=<literal> and n=<rows>")
    _add_common(p)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("render", help="classify a slice and write an image or voxel file")
    p.add_argument("spec", nargs="+", help="polynomial tokens")
    p.add_argument("--slice", default="j=0", help="fixed axes, e.g. j=0 or i2=0,j=0")
    p.add_argument("--window", type=_flag("window"), help="lo:hi, or one lo:hi per free axis")
    p.add_argument("--res", dest="resolution", type=_flag("resolution"), help="samples per axis")
    p.add_argument("--mode", choices=sorted(_MODES), default="voxel")
    p.add_argument("--camera", default="0,0,1", help="ray direction in free-axis coordinates")
    p.add_argument("--up", default="1,0,0", help="camera up vector")
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="run the self-check suites")
    p.add_argument("--suite", action="append", help="suite name (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def _join_values(argv: Sequence[str]) -> list[str]:
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    argv = _join_values(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ParseError as exc:
        print(f"bcjulia: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"bcjulia: error: {exc}", file=sys.stderr)
        return exc.code
    except DegenerateError as exc:
        print(f"bcjulia: degenerate polynomial: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ParseError, ValueError) as exc:
        print(f"bcjulia: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"bcjulia: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
