"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 domain error (including "no fully
robust matching"), 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bouquet import BouquetStructureError
from .compression import shrink
from .core import BOYS, GIRLS, InstanceError, deferred_acceptance, format_instance, format_matching, parse_instance
from .generate import MODES, UNIFORM, GeneratorConfig, generate
from .oracle import DEFAULT_BOUND, enumerate_stable
from .order import bits
from .robust import bouquet_for_error, build_robust, max_weight_robust, parse_errors, parse_weights
from .rotations import build_rotation_poset

EXIT_DOMAIN = 3
EXIT_IO = 4


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _bits_str(mask: int) -> str:
    return "{" + ",".join(str(v) for v in bits(mask)) + "}"


def _trace(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    print(format_matching(deferred_acceptance(inst, args.side)))
    return 0


def cmd_poset(args) -> int:
    inst = parse_instance(_read(args.instance))
    sys.stdout.write(build_rotation_poset(inst).format())
    return 0


def cmd_enumerate(args) -> int:
    inst = parse_instance(_read(args.instance))
    for m in enumerate_stable(inst, bound=args.bound).matchings:
        print(format_matching(m))
    return 0


def _parse_edges(text: str, size: int) -> list[tuple[int, int]]:
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].replace("->", " ").strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise InstanceError(f"edge line {lineno}: expected 'u v'")
        u, v = int(parts[0]), int(parts[1])
        if not (u < size and v < size):
            raise InstanceError(f"edge line {lineno}: id out of range 0..{size - 1}")
        edges.append((u, v))
    return edges


def cmd_compress(args) -> int:
    inst = parse_instance(_read(args.instance))
    poset = build_rotation_poset(inst)
    edges = _parse_edges(_read(args.edges), poset.size)
    sys.stdout.write(shrink(poset, edges).format())
    return 0


def _one_error(args, n: int):
    text = args.error if args.error is not None else _read(args.errors)
    errs = parse_errors(text, n)
    if len(errs) != 1:
        raise InstanceError(f"expected exactly one error, got {len(errs)}")
    return errs[0]


def cmd_bouquet(args) -> int:
    inst = parse_instance(_read(args.instance))
    poset = build_rotation_poset(inst)
    e = _one_error(args, inst.n)
    bq = bouquet_for_error(poset, inst, e)
    if args.trace:
        for i, info in enumerate(bq.trace):
            _trace(f"round {i}: tail={info['tail']} S={_bits_str(info['S'])} "
                   f"X={_bits_str(info['X'])} Y={_bits_str(info['Y'])} V={_bits_str(info['V'])}")
    if bq.dual:
        print("# order reversed (boy error): flowers are on the dual poset")
    for f in bq.flowers:
        print(f"{f.tail}: " + " ".join(str(h) for h in f.heads))
    print("edges: " + " ".join(f"{u}->{v}" for u, v in bq.edges()))
    return 0


def cmd_robust(args) -> int:
    inst = parse_instance(_read(args.instance))
    errors = parse_errors(_read(args.errors), inst.n)
    poset = build_rotation_poset(inst)
    res = build_robust(poset, inst, errors, jobs=args.jobs)
    if args.trace:
        _trace(f"rotations: {len(poset.rotations)}; distinct errors: {len(res.errors)}")
        for e, E in zip(res.errors, res.per_error_edges):
            _trace(f"{e.format()} -> " + " ".join(f"{u}->{v}" for u, v in E))
        _trace(res.meta.format().rstrip())
    if not res.exists:
        print("NO FULLY ROBUST MATCHING")
        return EXIT_DOMAIN
    if args.weights:
        w = parse_weights(_read(args.weights), inst.n)
        m, total = max_weight_robust(res, poset, inst, w, minimize=args.minimize)
        print(format_matching(m))
        print(f"weight: {total!r}")
    else:
        print(format_matching(res.witness))
    return 0


def cmd_gen(args) -> int:
    cfg = GeneratorConfig(args.n, args.seed, args.mode)
    text = format_instance(generate(cfg))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="robustmatch", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="deferred acceptance")
    s.add_argument("--instance", required=True)
    s.add_argument("--side", choices=[BOYS, GIRLS], default=BOYS, help="proposing side")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("poset", help="print the rotation poset")
    s.add_argument("--instance", required=True)
    s.set_defaults(func=cmd_poset)

    s = sub.add_parser("enumerate", help="print all stable matchings (brute force)")
    s.add_argument("--instance", required=True)
    s.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("compress", help="shrink the poset after adding edges")
    s.add_argument("--instance", required=True)
    s.add_argument("--edges", required=True, help="file with one 'u v' edge per line")
    s.set_defaults(func=cmd_compress)

    s = sub.add_parser("bouquet", help="bouquet for a single error")
    s.add_argument("--instance", required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--error", help="inline error, e.g. 'girl 1: c a b d'")
    g.add_argument("--errors", help="file holding exactly one error")
    s.add_argument("--trace", action="store_true")
    s.set_defaults(func=cmd_bouquet)

    s = sub.add_parser("robust", help="fully robust stable matching")
    s.add_argument("--instance", required=True)
    s.add_argument("--errors", required=True)
    s.add_argument("--weights")
    s.add_argument("--minimize", action="store_true")
    s.add_argument("--trace", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_robust)

    s = sub.add_parser("gen", help="generate an instance")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mode", choices=MODES, default=UNIFORM)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)
    return p


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, BouquetStructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())
