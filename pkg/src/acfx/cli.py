"""Command-line entry point.

Exit codes: 0 success (trivial / found / valid), 1 search exhausted or an
invariant failed, 2 bad flags or unparsable input, 3 nontrivial, 4 unknown,
5 search budget exceeded, 6 invalid certificate, 7 file I/O error.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .certificate import (
    Certificate,
    ConsequenceCertificate,
    parse_certificate,
    serialize_certificate,
    verify_certificate,
    verify_consequence,
)
from .invariants import run_standard_battery
from .oracle import DEFAULT_COSET_LIMIT, triviality_verdict
from .presentation import (
    abel_det,
    fig5_presentation,
    format_presentation,
    gen_gpn,
    gen_trivial,
    parse_presentation,
)
from .search import STRATEGIES, SearchConfig, scramble, search_trivialization
from .words import ParseError, format_word

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
EXIT_NONTRIVIAL, EXIT_UNKNOWN, EXIT_BUDGET, EXIT_INVALID, EXIT_IO = 3, 4, 5, 6, 7

# keys accepted in --config files, with their defaults
DEFAULTS = {
    "coset_limit": DEFAULT_COSET_LIMIT,
    "max_len": 24,
    "max_gens": 3,
    "strategy": "bfs",
    "beam_width": 1000,
    "budget": 1_000_000,
    "time_budget": float("inf"),
    "workers": 1,
    "seed": 0,
    "cases": 1000,
    "moves": 5,
}
_INT_KEYS = {"coset_limit", "max_len", "max_gens", "beam_width", "budget", "workers", "cases", "moves"}


class UsageError(Exception):
    pass


class FileIOError(Exception):
    pass


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileIOError(str(exc)) from None
    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not sep or key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown config entry {raw.strip()!r}")
        cfg[key] = value
    return cfg


def _coerce(key: str, value) -> object:
    try:
        if key in _INT_KEYS or key == "seed":
            value = int(value)
        elif key == "time_budget":
            value = float(value)
    except ValueError:
        raise UsageError(f"{key} must be a number, got {value!r}") from None
    if key == "strategy" and value not in STRATEGIES:
        raise UsageError(f"strategy must be one of {', '.join(STRATEGIES)}")
    if key in _INT_KEYS and value < 1:
        raise UsageError(f"{key} must be positive")
    if key == "time_budget" and not value > 0:
        raise UsageError("time_budget must be positive")
    return value


def resolve(args: argparse.Namespace, key: str):
    """Flag value, else config-file value, else the built-in default."""
    value = getattr(args, key, None)
    if value is None:
        value = args.config_values.get(key, DEFAULTS[key])
    return _coerce(key, value)


def read_presentation(arg: str):
    if arg.startswith("@"):
        try:
            arg = Path(arg[1:]).read_text(encoding="utf-8").strip()
        except OSError as exc:
            raise FileIOError(str(exc)) from None
    try:
        return parse_presentation(arg)
    except (ParseError, ValueError) as exc:
        raise UsageError(f"cannot parse presentation: {exc}") from None


def cmd_gen(args) -> int:
    if args.family == "fig5":
        P = fig5_presentation()
    else:
        if args.n is None or args.n < 0:
            raise UsageError(f"gen {args.family} needs a non-negative n")
        P = gen_trivial(args.n) if args.family == "trivial" else gen_gpn(args.n)
    print(format_presentation(P))
    return EXIT_OK


def cmd_judge(args) -> int:
    P = read_presentation(args.presentation)
    verdict = triviality_verdict(P, coset_limit=resolve(args, "coset_limit"))
    print(verdict.line())
    return {"TRIVIAL": EXIT_OK, "NONTRIVIAL": EXIT_NONTRIVIAL}.get(verdict.kind, EXIT_UNKNOWN)


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise FileIOError(str(exc)) from None


def cmd_search(args) -> int:
    P = read_presentation(args.presentation)
    cfg = SearchConfig(
        max_len=resolve(args, "max_len"),
        max_gens=resolve(args, "max_gens"),
        strategy=resolve(args, "strategy"),
        beam_width=resolve(args, "beam_width"),
        node_budget=resolve(args, "budget"),
        time_budget=resolve(args, "time_budget"),
        workers=resolve(args, "workers"),
    )
    try:
        out = search_trivialization(P, cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(out.summary_line(with_time=False))
    print(f"time_ms={int(out.stats.wall_time * 1000)}", file=sys.stderr)
    if out.status == "FOUND":
        if args.out:
            _write(args.out, serialize_certificate(out.certificate))
        return EXIT_OK
    return EXIT_BUDGET if out.status == "BUDGET" else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        text = Path(args.certificate).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileIOError(str(exc)) from None
    try:
        cert = parse_certificate(text)
    except (ParseError, ValueError) as exc:
        raise UsageError(f"cannot parse certificate: {exc}") from None
    if isinstance(cert, ConsequenceCertificate):
        try:
            verdict = verify_consequence(cert)
        except (IndexError, ValueError) as exc:
            print(f"INVALID {exc}")
            return EXIT_INVALID
    else:
        verdict = verify_certificate(cert)
    print(verdict.line())
    return EXIT_OK if verdict.valid else EXIT_INVALID


def cmd_scramble(args) -> int:
    P = read_presentation(args.presentation)
    max_gens = args.max_gens if args.max_gens is not None else args.config_values.get("max_gens")
    max_gens = _coerce("max_gens", max_gens) if max_gens is not None else P.gen_count + 1
    S, moves = scramble(P, resolve(args, "moves"), resolve(args, "seed"),
                        resolve(args, "max_len"), max_gens)
    print(format_presentation(S))
    if args.out:
        _write(args.out, serialize_certificate(Certificate(P, tuple(moves), S)))
    return EXIT_OK


def cmd_invariants(args) -> int:
    results = run_standard_battery(resolve(args, "cases"), resolve(args, "seed"))
    for r in results:
        print(r.line())
    passed = sum(r.ok for r in results)
    print(f"invariants: {passed} passed, {len(results) - passed} failed")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


def cmd_report(args) -> int:
    """Machine-check the family and derivation claims that have an algebraic
    encoding."""
    limit = resolve(args, "coset_limit")
    for n in range(args.max_n + 1):
        P = gen_gpn(n)
        v = triviality_verdict(P, coset_limit=limit)
        print(f"GP{n} {format_presentation(P)} abel_det={abel_det(P)} verdict={v.line()}")
    F = fig5_presentation()
    print(f"fig5 {format_presentation(F)} abel_det={abel_det(F)}")
    for name in ("fig5_braid", "fig5_power"):
        cert = parse_certificate(resources.files("acfx").joinpath(f"data/{name}.acfx").read_text())
        v = verify_consequence(cert)
        print(f"{name} target={format_word(cert.target)} terms={len(cert.terms)} {v.line()}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="acfx", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file; flags take precedence")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="print a named presentation")
    p.add_argument("family", choices=("trivial", "gpn", "fig5"))
    p.add_argument("n", nargs="?", type=int)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("judge", help="decide triviality if possible")
    p.add_argument("presentation", help="inline text or @file")
    p.add_argument("--coset-limit", dest="coset_limit", type=int)
    p.set_defaults(func=cmd_judge)

    p = sub.add_parser("search", help="search for a trivialization")
    p.add_argument("presentation")
    p.add_argument("--max-len", dest="max_len", type=int)
    p.add_argument("--max-gens", dest="max_gens", type=int)
    p.add_argument("--strategy", choices=STRATEGIES)
    p.add_argument("--beam-width", dest="beam_width", type=int)
    p.add_argument("--budget", type=int, help="maximum expanded nodes")
    p.add_argument("--time-budget", dest="time_budget", type=float, help="seconds")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="certificate file written when found")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="check a certificate file")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scramble", help="apply seeded random moves")
    p.add_argument("presentation")
    p.add_argument("--moves", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-len", dest="max_len", type=int)
    p.add_argument("--max-gens", dest="max_gens", type=int)
    p.add_argument("--out", help="write the scramble as a certificate")
    p.set_defaults(func=cmd_scramble)

    p = sub.add_parser("invariants", help="run the randomized invariant battery")
    p.add_argument("--cases", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("report", help="check the G(P_n) family and the fig5 derivation")
    p.add_argument("--max-n", dest="max_n", type=int, default=2)
    p.add_argument("--coset-limit", dest="coset_limit", type=int)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.config_values = load_config(args.config) if args.config else {}
        for key, value in args.config_values.items():
            _coerce(key, value)
        return args.func(args)
    except UsageError as exc:
        print(f"acfx: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileIOError as exc:
        print(f"acfx: file error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
