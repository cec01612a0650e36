"""``ultrawelch`` command line: check, search, demo, symdim.

Exit codes: 0 success, 1 input error, 2 some bound Violated, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from importlib import resources
from pathlib import Path

from . import __version__
from .linalg import ConfigError, FrameConfig
from .scalar import Backend, ScalarParseError, binomial_valuation, find_field_condition_counterexample, parse_rational
from .search import SearchSpace, Status, search_equality, search_equiangular, search_zauner
from .symtensor import sym_dim
from .welch import IncompatibleVariant, NonUnitalConfig, Variant, Verdict, check_bound, check_unital, demo_suite

FIXTURE_VERSION = "v1"
EXIT_OK, EXIT_INPUT, EXIT_VIOLATED, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def fixtures_dir() -> Path:
    override = os.environ.get("ULTRAWELCH_FIXTURES")
    if override:
        return Path(override)
    return Path(str(resources.files("ultrawelch").joinpath("fixtures", FIXTURE_VERSION)))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(obj, out: str | None):
    text = dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _manifest(args, command: str, **extra) -> dict:
    return {
        "command": command,
        "input": getattr(args, "config", None),
        "params": extra,
        "seed": getattr(args, "seed", None),
        "budget": getattr(args, "budget", None),
        "out": getattr(args, "out", None),
        "version": __version__,
    }


def _resolve_config(ref: str) -> Path:
    path = Path(ref)
    if path.exists():
        return path
    named = fixtures_dir() / f"{ref}.json"
    if named.exists():
        return named
    raise InputError(f"{ref}: no such file or fixture")


def _m_list(text: str) -> list[int]:
    try:
        ms = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--m expects a comma separated list of integers, got {text!r}") from None
    if not ms or any(m < 1 for m in ms):
        raise InputError("--m values must be positive")
    return ms


def cmd_check(args) -> int:
    path = _resolve_config(args.config)
    config = FrameConfig.loads(path.read_text())
    if args.prime is not None:
        if not config.backend.is_padic:
            raise InputError("--prime only applies to p-adic configs")
        config = replace(config, backend=Backend.padic(args.prime))
    variant = Variant(args.variant) if args.variant else (Variant.PADIC if config.backend.is_padic else Variant.NONARCH)
    checker = check_unital if args.unital else check_bound
    reports = [checker(config, m, variant).to_json() for m in _m_list(args.m)]
    manifest = _manifest(
        args, "check", m=args.m, variant=variant.value, prime=args.prime, unital=args.unital
    )
    _emit({"manifest": manifest, "config": config.to_json(), "reports": reports}, args.out)
    return EXIT_VIOLATED if any(r["verdict"] == Verdict.VIOLATED.value for r in reports) else EXIT_OK


def _lattice_kwargs(args) -> dict:
    out = {"scale": args.scale, "signed": args.signed, "distinct": args.distinct}
    if args.values:
        out["values"] = tuple(parse_rational(v.strip()) for v in args.values.split(","))
    return out


def cmd_search(args) -> int:
    common = dict(seed=args.seed, budget=args.budget, workers=args.workers)
    lattice = _lattice_kwargs(args)
    if args.kind == "equality":
        if args.n is None:
            raise InputError("equality search needs --n")
        space = SearchSpace(args.prime, args.d, args.n, args.precision, parse_rational(args.a), **lattice)
        result = search_equality(space, args.m_order, **common)
    elif args.kind == "zauner":
        result = search_zauner(args.prime, args.d, args.precision, **common, **lattice)
    else:
        result = search_equiangular(
            args.prime, args.d, parse_rational(args.a), args.gamma, args.n_max, args.precision, **common, **lattice
        )
    manifest = _manifest(
        args,
        "search",
        kind=args.kind,
        prime=args.prime,
        d=args.d,
        n=args.n,
        precision=args.precision,
        a=args.a,
        gamma=args.gamma,
        n_max=args.n_max,
        m=args.m_order,
        workers=args.workers,
        **{k: (v if not isinstance(v, tuple) else [str(x) for x in v]) for k, v in lattice.items()},
    )
    _emit({"manifest": manifest, "result": result.to_json()}, args.out)
    return EXIT_BUDGET if result.status is Status.BUDGET else EXIT_OK


def demo_bundle() -> dict:
    entries = {}
    for name, report in demo_suite():
        entries[name] = report.to_json()
    for p in (2, 3, 5, 7, 11, 13):
        witness = find_field_condition_counterexample(Backend.padic(p), p)
        entries[f"field-condition-counterexample-p{p}"] = list(witness) if witness else None
    entries["symdim-table"] = [[d, m, sym_dim(d, m)] for d in range(1, 6) for m in range(1, 6)]
    return entries


def cmd_demo(args) -> int:
    _emit({"manifest": _manifest(args, "demo"), "entries": demo_bundle()}, args.out)
    return EXIT_OK


def cmd_symdim(args) -> int:
    if args.d < 1 or args.m < 1:
        raise InputError("d and m must be positive")
    out = {"d": args.d, "m": args.m, "dim": sym_dim(args.d, args.m)}
    if args.prime is not None:
        Backend.padic(args.prime)
        out["prime"] = args.prime
        out["valuation"] = binomial_valuation(args.d + args.m - 1, args.m, args.prime)
    _emit(out, args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; exit 2 is reserved for Violated
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ultrawelch", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="evaluate the bound for a configuration file")
    check.add_argument("--config", required=True, help="config path or fixture name")
    check.add_argument("--m", default="1", help="comma separated orders, e.g. 1,2,3")
    check.add_argument("--variant", choices=[v.value for v in Variant])
    check.add_argument("--prime", type=int, help="override the prime of a p-adic config")
    check.add_argument("--unital", action="store_true", help="use the unital form (requires f_j(tau_j) = 1)")
    check.add_argument("--out")
    check.set_defaults(func=cmd_check)

    search = sub.add_parser("search", help="lattice search for extremal configurations")
    search.add_argument("kind", choices=["equality", "zauner", "equiangular"])
    search.add_argument("--prime", type=int, required=True)
    search.add_argument("--precision", type=int, default=1, help="digits range over 0..p^k-1")
    search.add_argument("--d", type=int, required=True)
    search.add_argument("--n", type=int)
    search.add_argument("--n-max", type=int, default=3)
    search.add_argument("--a", default="1")
    search.add_argument("--gamma", type=int, help="cross product valuation (equiangular)")
    search.add_argument("--m", dest="m_order", type=int, default=1)
    search.add_argument("--scale", type=int, default=0)
    search.add_argument("--signed", action="store_true")
    search.add_argument("--distinct", action="store_true")
    search.add_argument("--values", help="explicit comma separated alphabet of rationals")
    search.add_argument("--seed", type=int)
    search.add_argument("--budget", type=int, default=10_000_000)
    search.add_argument("--workers", type=int, default=1)
    search.add_argument("--out")
    search.set_defaults(func=cmd_search)

    demo = sub.add_parser("demo", help="curated reproduction bundle")
    demo.add_argument("--out")
    demo.set_defaults(func=cmd_demo)

    symdim = sub.add_parser("symdim", help="dimension of Sym^m and its p-adic valuation")
    symdim.add_argument("d", type=int)
    symdim.add_argument("m", type=int)
    symdim.add_argument("--prime", type=int)
    symdim.add_argument("--out")
    symdim.set_defaults(func=cmd_symdim)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        InputError,
        ConfigError,
        ScalarParseError,
        IncompatibleVariant,
        NonUnitalConfig,
        ValueError,
        TypeError,
        OSError,
    ) as exc:
        print(f"ultrawelch {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
