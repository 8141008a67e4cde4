"""grplab command-line interface.

Exit codes: 0 success, 1 usage or malformed input, 2 invariant violation,
3 budget exceeded.  Reports are canonical JSON (or CSV with --format csv);
elapsed_ms is recorded as 0 unless --timing is given, keeping identical
runs byte-identical.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence

from . import errors
from .counting import (
    all_nonempty_subsets,
    count_ap3,
    count_mixing_tuples,
    count_power_equation,
    count_xy_eq_z,
)
from .groups import build_group, conjugacy_classes
from .lab import load_config, sweep
from .ramsey import Coloring, cip_density_experiment, monochromatic_tuple_search, schur_adversarial_search, schur_counts
from .regularity import check_product_rich, check_regular_position
from .reports import canonical_json, rows_to_csv, _flatten
from .sets import (
    doubling_constant,
    growth_profile,
    is_product_free,
    make_set,
    tripling_constant,
)
from .spectral import character_degrees, quasirandomness_degree

_USAGE_ERRORS = (
    errors.MalformedSpec,
    errors.NotPrimePower,
    errors.ConfigInvalid,
    errors.GroupMismatch,
    errors.DomainMismatch,
    errors.EngineUnsupported,
    errors.KindUnsupportedForGroup,
    errors.EmptySet,
)
_INVARIANT_ERRORS = (errors.NotAGroup, errors.ValidationFailed, errors.PointwiseIdentityFailed)
_BUDGET_ERRORS = (
    errors.OrderCapExceeded,
    errors.BudgetExceeded,
    errors.ExactCapExceeded,
    errors.GridTooLarge,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1 on usage errors, not 2
        self.print_usage(sys.stderr)
        raise SystemExit((self.prog + ": error: " + message, 1))


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="config file supplying seed/threads/format defaults")
    p.add_argument("--seed", type=int, default=None, help="base seed (64-bit)")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--out", help="write the report to this path instead of stdout")
    p.add_argument("--timing", action="store_true", help="record wall-clock in reports")


def _settle_common(args: argparse.Namespace) -> None:
    """Fill unset common flags from the config file; explicit flags win."""
    cfg = load_config(args.config) if args.config else None
    if args.seed is None:
        args.seed = cfg.seed if cfg else 0
    if args.threads is None:
        args.threads = cfg.threads if cfg else 1
    if args.format is None:
        args.format = cfg.format if cfg and cfg.format in ("json", "csv") else "json"
    if cfg and cfg.timing:
        args.timing = True


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="grplab", description="finite-group counting laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", help="group construction info")
    p.add_argument("--group", required=True)
    p.add_argument("--classes", action="store_true", help="include the conjugacy partition")
    _add_common(p)

    p = sub.add_parser("stats", help="subset growth statistics")
    p.add_argument("--group", required=True)
    p.add_argument("--set", required=True, dest="set_spec")
    p.add_argument("--m-max", type=int, default=5)
    _add_common(p)

    p = sub.add_parser("count", help="count solutions of an equation")
    p.add_argument("--group", required=True)
    p.add_argument("--sets", nargs="+", required=True)
    p.add_argument("--equation", required=True, help="xyz | ap3 | power:n1,n2,n3 | mixing:n")
    p.add_argument("--engine", choices=("auto", "brute", "fft"), default="auto")
    _add_common(p)

    p = sub.add_parser("mixing", help="count mixing tuples (all subproducts constrained)")
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sets", nargs="*", default=[], help="2^n-1 set specs in binary-subset order")
    p.add_argument("--set-all", dest="set_all", help="one set spec used for every subset")
    p.add_argument("--engine", choices=("auto", "brute"), default="auto")
    _add_common(p)

    p = sub.add_parser("quasirandom", help="character degrees and quasirandomness degree")
    p.add_argument("--group", required=True)
    _add_common(p)

    p = sub.add_parser("schur", help="per-color product-triple counts")
    p.add_argument("--group", required=True)
    p.add_argument("--coloring", help="coloring file or random:k,seed")
    p.add_argument("--search", action="store_true", help="adversarial minimizing search")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--iterations", type=int, default=200)
    p.add_argument("--restarts", type=int, default=10)
    _add_common(p)

    p = sub.add_parser("hindman", help="monochromatic product-tuple search")
    p.add_argument("--group", required=True)
    p.add_argument("--coloring", required=True, help="coloring file or random:k,seed")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--nontrivial", action="store_true")
    p.add_argument("--budget", type=int, default=10**7)
    _add_common(p)

    p = sub.add_parser("cip", help="monochromatic tuple densities over random colorings")
    p.add_argument("--group", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--samples", type=int, default=100_000)
    _add_common(p)

    p = sub.add_parser("regular", help="regular-position check for three sets")
    p.add_argument("--group", required=True)
    p.add_argument("--sets", nargs=3, required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--trials", type=int, default=500)
    _add_common(p)

    p = sub.add_parser("rich", help="product-richness check for one set")
    p.add_argument("--group", required=True)
    p.add_argument("--set", required=True, dest="set_spec")
    p.add_argument("--eps", required=True)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--trials", type=int, default=2000)
    _add_common(p)

    p = sub.add_parser("sweep", help="run a recipe config over its grid")
    _add_common(p)

    return parser


def _parse_eps(text: str) -> Fraction:
    return Fraction(text)


def _load_coloring(group, spec: str) -> Coloring:
    if spec.startswith("random:"):
        body = spec[len("random:"):]
        try:
            k, seed = (int(x) for x in body.split(","))
        except ValueError:
            raise errors.MalformedSpec(f"bad coloring spec {spec!r}") from None
        return Coloring.random(group, k, seed)
    with open(spec, encoding="utf-8") as fh:
        return Coloring.from_json(group, fh.read())


def _emit(payload: Dict[str, Any], args: argparse.Namespace, started: float) -> None:
    payload.setdefault("seed", args.seed)
    payload["elapsed_ms"] = int((time.monotonic() - started) * 1000) if args.timing else 0
    if args.format == "csv":
        text = rows_to_csv([_flatten(payload)])
    else:
        text = canonical_json(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_group(args: argparse.Namespace, started: float) -> None:
    group = build_group(args.group)
    payload: Dict[str, Any] = {
        "group": args.group,
        "spec": group.spec_text,
        "order": group.order,
        "abelian": group.is_abelian,
        "cyclic_moduli": list(group.cyclic_moduli) if group.cyclic_moduli else None,
    }
    if args.classes:
        cc = conjugacy_classes(group)
        payload["class_count"] = cc.count
        payload["class_sizes"] = cc.sizes()
    _emit(payload, args, started)


def _cmd_stats(args: argparse.Namespace, started: float) -> None:
    group = build_group(args.group)
    a = make_set(group, args.set_spec)
    payload = {
        "group": args.group,
        "set": args.set_spec,
        "card": a.card,
        "density": a.density,
        "doubling": doubling_constant(a) if a.card else None,
        "tripling_aaa": tripling_constant(a, "aaa") if a.card else None,
        "tripling_aia": tripling_constant(a, "aia") if a.card else None,
        "growth_profile": growth_profile(a, args.m_max) if a.card else [],
        "product_free": is_product_free(a),
    }
    _emit(payload, args, started)


def _cmd_count(args: argparse.Namespace, started: float) -> None:
    group = build_group(args.group)
    sets = [make_set(group, s) for s in args.sets]
    equation = args.equation
    if equation == "xyz":
        if len(sets) != 3:
            raise errors.ConfigInvalid("xyz needs exactly three sets")
        rep = count_xy_eq_z(sets[0], sets[1], sets[2], args.engine)
    elif equation == "ap3":
        if len(sets) != 1:
            raise errors.ConfigInvalid("ap3 needs exactly one set")
        engine = "cayley" if args.engine == "auto" else args.engine
        if engine == "fft":
            raise errors.EngineUnsupported("ap3 supports engines brute and auto")
        rep = count_ap3(sets[0], engine)
    elif equation.startswith("power:"):
        if len(sets) != 1:
            raise errors.ConfigInvalid("power needs exactly one set")
        try:
            n1, n2, n3 = (int(x) for x in equation[len("power:"):].split(","))
        except ValueError:
            raise errors.MalformedSpec(f"bad power equation {equation!r}") from None
        engine = "cayley" if args.engine == "auto" else args.engine
        if engine == "fft":
            raise errors.EngineUnsupported("power supports engines brute and auto")
        rep = count_power_equation(sets[0], n1, n2, n3, engine)
    elif equation.startswith("mixing:"):
        try:
            n = int(equation[len("mixing:"):])
        except ValueError:
            raise errors.MalformedSpec(f"bad mixing equation {equation!r}") from None
        subsets = all_nonempty_subsets(n)
        if len(sets) == 1:
            sets = sets * len(subsets)
        if len(sets) != len(subsets):
            raise errors.ConfigInvalid(f"mixing:{n} needs {len(subsets)} sets (or one for all)")
        engine = "cayley" if args.engine == "auto" else args.engine
        if engine == "fft":
            raise errors.EngineUnsupported("mixing supports engines brute and auto")
        rep = count_mixing_tuples(n, dict(zip(subsets, sets)), engine)
    else:
        raise errors.MalformedSpec(f"unknown equation {equation!r}")
    payload = {"group": args.group, "sets": list(args.sets), **rep.to_dict()}
    _emit(payload, args, started)


def _cmd_mixing(args: argparse.Namespace, started: float) -> None:
    group = build_group(args.group)
    subsets = all_nonempty_subsets(args.n)
    if args.set_all:
        sets = [make_set(group, args.set_all)] * len(subsets)
        set_specs = [args.set_all] * len(subsets)
    else:
        if len(args.sets) != len(subsets):
            raise errors.ConfigInvalid(
                f"mixing n={args.n} needs {len(subsets)} sets in binary-subset order"
            )
        sets = [make_set(group, s) for s in args.sets]
        set_specs = list(args.sets)
    rep = count_mixing_tuples(args.n, dict(zip(subsets, sets)), args.engine)
    payload = {"group": args.group, "sets": set_specs, **rep.to_dict()}
    _emit(payload, args, started)


def _cmd_quasirandom(args: argparse.Namespace, started: float) -> None:
    group = build_group(args.group)
    profile = character_degrees(group, seed=args.seed)
    payload = {
        "group": args.group,
        "order": group.order,
        "class_count": profile.class_count,
        "degrees": list(profile.degrees),
        "quasirandomness_degree": quasirandomness_degree(group, seed=args.seed),
        "abelianization_order": profile.abelianization_order,
    }
    _emit(payload, args, started)


def _cmd_schur(args: argparse.Namespace, started: float) -> None:
    group = build_group(args.group)
    if args.search:
        result = schur_adversarial_search(
            group, args.k, iterations=args.iterations, restarts=args.restarts, seed=args.seed
        )
        payload = {"group": args.group, "mode": "search", **result.to_dict()}
    else:
        if not args.coloring:
            raise errors.ConfigInvalid("schur needs --coloring (or --search)")
        coloring = _load_coloring(group, args.coloring)
        rep = schur_counts(coloring)
        payload = {"group": args.group, "coloring": args.coloring, **rep.to_dict()}
    _emit(payload, args, started)


def _cmd_hindman(args: argparse.Namespace, started: float) -> None:
    group = build_group(args.group)
    coloring = _load_coloring(group, args.coloring)
    result = monochromatic_tuple_search(
        coloring, args.n, budget=args.budget, nontrivial=args.nontrivial
    )
    payload = {
        "group": args.group,
        "coloring": args.coloring,
        "n": args.n,
        "nontrivial": args.nontrivial,
        **result.to_dict(),
    }
    _emit(payload, args, started)


def _cmd_cip(args: argparse.Namespace, started: float) -> None:
    group = build_group(args.group)
    payload = cip_density_experiment(
        group, args.k, args.n, trials=args.trials, seed=args.seed, samples=args.samples
    )
    _emit(payload, args, started)


def _cmd_regular(args: argparse.Namespace, started: float) -> None:
    group = build_group(args.group)
    sets = [make_set(group, s) for s in args.sets]
    verdict = check_regular_position(
        sets[0], sets[1], sets[2], _parse_eps(args.eps), mode=args.mode, trials=args.trials, seed=args.seed
    )
    payload = {
        "group": args.group,
        "sets": list(args.sets),
        "eps": _parse_eps(args.eps),
        "mode": args.mode,
        **verdict.to_dict(),
    }
    _emit(payload, args, started)


def _cmd_rich(args: argparse.Namespace, started: float) -> None:
    group = build_group(args.group)
    a = make_set(group, args.set_spec)
    verdict = check_product_rich(
        a, _parse_eps(args.eps), mode=args.mode, trials=args.trials, seed=args.seed
    )
    payload = {
        "group": args.group,
        "set": args.set_spec,
        "eps": _parse_eps(args.eps),
        "mode": args.mode,
        **verdict.to_dict(),
    }
    _emit(payload, args, started)


def _cmd_sweep(args: argparse.Namespace, started: float) -> None:
    if not args.config:
        raise errors.ConfigInvalid("sweep needs --config")
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.threads is not None:
        cfg.threads = args.threads
    if args.format is not None:
        cfg.format = args.format
    if args.timing:
        cfg.timing = True
    reports, rows = sweep(cfg)
    if cfg.format == "csv":
        text = rows_to_csv(rows)
    else:
        text = canonical_json([r.to_dict() for r in reports])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_COMMANDS = {
    "group": _cmd_group,
    "stats": _cmd_stats,
    "count": _cmd_count,
    "mixing": _cmd_mixing,
    "quasirandom": _cmd_quasirandom,
    "schur": _cmd_schur,
    "hindman": _cmd_hindman,
    "cip": _cmd_cip,
    "regular": _cmd_regular,
    "rich": _cmd_rich,
    "sweep": _cmd_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, tuple):
            message, code = exc.code
            print(message, file=sys.stderr)
            return code
        return 1 if exc.code else 0
    started = time.monotonic()
    try:
        if args.command != "sweep":
            _settle_common(args)
        _COMMANDS[args.command](args, started)
    except _USAGE_ERRORS as exc:
        print(f"grplab: {exc}", file=sys.stderr)
        return 1
    except _INVARIANT_ERRORS as exc:
        print(f"grplab: invariant violation: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"grplab: invariant violation: {exc}", file=sys.stderr)
        return 2
    except _BUDGET_ERRORS as exc:
        print(f"grplab: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"grplab: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"grplab: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
