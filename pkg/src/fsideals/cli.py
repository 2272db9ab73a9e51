"""Command-line front end.

Every subcommand prints one JSON report (sorted keys, so identical runs are
byte-identical).  Exit codes: 0 success or pass, 1 definitional failure
(no witness, counterexample, exhausted run), 2 resource limits, 64 usage.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
from fractions import Fraction

from . import __version__
from .errors import RESOURCE_ERRORS, FsIdealsError
from .ground import (GroundSet, decompositions, fs_set, greedy_very_sparse, is_sparse,
                     is_very_sparse, naturals, satisfies_growth_rule, tail_shift)
from .ideals import OracleConfig, fraction_json, judge, summable_weight
from .katetov import (KatetovMap, all_subsets, coloring, load_coloring, search_witness,
                      verify_witness)
from .partition import h1_profile
from .refine import refine_avoid, refine_fs1
from .search import fs_witness, longest_ap
from .separation import (Schedule, build_separation, load_trace, trace_coloring,
                         verify_trace)

EXIT_OK, EXIT_FAIL, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load(text: str):
    if os.path.exists(text):
        with open(text) as fh:
            return json.load(fh)
    return None


def parse_set(text: str) -> list[int]:
    """Comma list ``1,2,4`` or a path to a JSON array."""
    data = _load(text)
    if data is None:
        try:
            data = [int(t) for t in text.split(",") if t.strip()]
        except ValueError:
            raise UsageError(f"cannot read a set from {text!r}")
    return [int(v) for v in data]


def parse_family(text: str) -> list[list[int]]:
    """``1,2;3,4`` or a path to a JSON array of arrays."""
    data = _load(text)
    if data is None:
        return [parse_set(part) for part in text.split(";")]
    return [[int(v) for v in part] for part in data]


def parse_ideal(text: str) -> OracleConfig:
    """``hindman:3``, ``folkman:2``, ``vdW:5`` or ``summable:10`` (the parameter is optional)."""
    name, _, param = text.partition(":")
    makers = {"summable": (OracleConfig.summable, Fraction), "vdw": (OracleConfig.vdw, int),
              "hindman": (OracleConfig.hindman, int), "folkman": (OracleConfig.folkman, int)}
    key = name.lower()
    if key not in makers:
        raise UsageError(f"unknown ideal {name!r}")
    make, conv = makers[key]
    try:
        return make(conv(param)) if param else make()
    except ValueError:
        raise UsageError(f"bad ideal parameter in {text!r}")


def _input_hash(args) -> str:
    payload = {k: v for k, v in sorted(vars(args).items()) if k != "handler"}
    return hashlib.sha256(json.dumps(payload, sort_keys=True, default=str).encode()).hexdigest()[:16]


# handlers return (exit status, result payload)

def cmd_fs(args):
    D = GroundSet.of(parse_set(args.set))
    out = {"ground": D.to_json(), "fs": list(fs_set(D).values)}
    if args.decompositions:
        out["decompositions"] = decompositions(D).to_json()
    return EXIT_OK, out


def cmd_sparse(args):
    D = GroundSet.of(parse_set(args.set))
    out = {"ground": D.to_json(), "sparse": is_sparse(D), "very_sparse": is_very_sparse(D),
           "growth_rule": satisfies_growth_rule(D)}
    want = out["very_sparse"] if args.require == "very" else out["sparse"]
    return (EXIT_OK if want else EXIT_FAIL), out


def cmd_greedy(args):
    if args.source == "naturals":
        src = naturals(args.start)
    elif args.source == "random":
        rng = random.Random(args.seed)
        src = _random_stream(rng, args.start)
    else:
        src = parse_set(args.source)
    D = greedy_very_sparse(src, args.length)
    return EXIT_OK, {"ground": D.to_json(), "very_sparse": is_very_sparse(D)}


def _random_stream(rng, start):
    x = max(1, start)
    while True:
        yield x
        x += rng.randint(1, x)


def cmd_tail(args):
    res = tail_shift(GroundSet.of(parse_set(args.D)), GroundSet.of(parse_set(args.E)), args.d)
    return EXIT_OK, res.to_json()


def cmd_witness_ip(args):
    w = fs_witness(parse_set(args.set), args.depth, args.universe)
    if w is None:
        return EXIT_FAIL, {"witness": "none", "depth": args.depth}
    return EXIT_OK, {"witness": w.to_json(), "depth": args.depth}


def cmd_witness_ap(args):
    ap = longest_ap(parse_set(args.set))
    out = {"longest": ap.to_json(), "terms": ap.terms()}
    if args.length is not None:
        out["required_length"] = args.length
        return (EXIT_OK if ap.length >= args.length else EXIT_FAIL), out
    return EXIT_OK, out


def cmd_weight(args):
    return EXIT_OK, {"weight": fraction_json(summable_weight(parse_set(args.set)))}


def cmd_judge(args):
    j = judge(parse_set(args.set), parse_ideal(args.ideal))
    return EXIT_OK, j.to_json()


def cmd_refine_fs1(args):
    rep = refine_fs1(parse_set(args.D0), parse_family(args.chain), args.length)
    ok = rep.all_verified and rep.exhausted_at is None
    return (EXIT_OK if ok else EXIT_FAIL), rep.to_json()


def cmd_refine_avoid(args):
    rep = refine_avoid(parse_set(args.set), parse_family(args.avoid), args.length)
    ok = rep.all_verified and rep.exhausted_at is None
    return (EXIT_OK if ok else EXIT_FAIL), rep.to_json()


def cmd_partition(args):
    prof = h1_profile(GroundSet.of(parse_set(args.set)))
    if args.format == "csv":
        return EXIT_OK, prof.to_csv()
    return EXIT_OK, prof.to_json()


def _map_arg(text: str, codomain):
    data = _load(text)
    if isinstance(data, dict):
        return load_coloring(text)
    values = data if data is not None else parse_set(text)
    return KatetovMap.from_values(values, codomain)


def _probes(args, M):
    if args.probes:
        return parse_family(args.probes), "explicit"
    if args.all_probes:
        return list(all_subsets(M)), "all-subsets"
    rng = random.Random(args.seed)
    probes = [sorted(rng.sample(range(M), rng.randint(0, M))) for _ in range(args.random_probes)]
    return probes, f"random({args.random_probes}, seed={args.seed})"


def cmd_katetov_verify(args):
    f = _map_arg(args.map, args.codomain)
    probes, family = _probes(args, f.codomain_size)
    rep = verify_witness(f, parse_ideal(args.source), parse_ideal(args.target), probes, family)
    return (EXIT_OK if rep.passed else EXIT_FAIL), rep.to_json()


def cmd_katetov_search(args):
    probes, family = _probes(args, args.M)
    f = search_witness(args.N, args.M, parse_ideal(args.source), parse_ideal(args.target),
                       probes, args.family, args.budget, family)
    out = {"N": args.N, "M": args.M, "family": args.family, "probes": family,
           "map": None if f is None else f.to_json()}
    return (EXIT_FAIL if f is None else EXIT_OK), out


def _coloring_arg(args):
    data = _load(args.coloring)
    if data is not None:
        f = load_coloring(args.coloring)
        return f, {"name": f.name, "table": f.to_json(), "codomain": f.codomain_size}
    # --domain D means the coloring lives on [1, D]; index 0 is padding
    f = coloring(args.coloring, args.domain + 1)
    return f, {"name": args.coloring, "domain": args.domain + 1}


def cmd_separate(args):
    f, desc = _coloring_arg(args)
    schedule = Schedule(tuple(parse_set(args.schedule))) if args.schedule else None
    depths = parse_set(args.depths) if args.depths else None
    trace = build_separation(f, schedule, args.stages, depths, args.fiber_depth,
                             descriptor=desc)
    check = verify_trace(trace, f)
    out = trace.to_json()
    out["verification"] = check.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(trace.to_json(), fh, sort_keys=True)
    return (EXIT_OK if trace.complete and check.ok else EXIT_FAIL), out


def cmd_verify_trace(args):
    trace = load_trace(args.trace)
    check = verify_trace(trace, trace_coloring(trace))
    out = check.to_json()
    out["complete"] = trace.complete
    return (EXIT_OK if check.ok else EXIT_FAIL), out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fsideals", description="Finite-sums set algebra and ideal oracles.")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1,
                   help="worker cap (recorded; the searches run sequentially)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    # the global flags are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)

    def add(name, handler, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(handler=handler)
        return sp

    sp = add("fs", cmd_fs, "finite sums of a ground set")
    sp.add_argument("--set", required=True)
    sp.add_argument("--decompositions", action="store_true")

    sp = add("sparse", cmd_sparse, "sparseness checks (exit 1 when the required property fails)")
    sp.add_argument("--set", required=True)
    sp.add_argument("--require", choices=("sparse", "very"), default="very")

    sp = add("greedy", cmd_greedy, "greedy very-sparse selection")
    sp.add_argument("--source", default="naturals",
                    help="'naturals', 'random' (seeded geometric stream) or a set")
    sp.add_argument("--start", type=int, default=1)
    sp.add_argument("--length", type=int, default=10)

    sp = add("tail", cmd_tail, "least tail shift e")
    sp.add_argument("--D", required=True)
    sp.add_argument("--E", required=True)
    sp.add_argument("--d", type=int, required=True)

    sp = add("witness-ip", cmd_witness_ip, "FS-witness search")
    sp.add_argument("--set", required=True)
    sp.add_argument("--depth", type=int, default=4)
    sp.add_argument("--universe", type=int)

    sp = add("witness-ap", cmd_witness_ap, "longest arithmetic progression")
    sp.add_argument("--set", required=True)
    sp.add_argument("--length", type=int)

    sp = add("weight", cmd_weight, "exact summable weight")
    sp.add_argument("--set", required=True)

    sp = add("judge", cmd_judge, "finite ideal oracle")
    sp.add_argument("--set", required=True)
    sp.add_argument("--ideal", required=True, help="e.g. hindman:4, vdW:5, summable:10")

    sp = add("refine-fs1", cmd_refine_fs1, "diagonal refinement through a chain")
    sp.add_argument("--D0", required=True)
    sp.add_argument("--chain", required=True, help="'1,2;3,4' or a JSON file of arrays")
    sp.add_argument("--length", type=int, required=True)

    sp = add("refine-avoid", cmd_refine_avoid, "refinement avoiding small sets")
    sp.add_argument("--set", required=True)
    sp.add_argument("--avoid", required=True, help="'1,2;3,4' or a JSON file of arrays")
    sp.add_argument("--length", type=int)

    sp = add("partition", cmd_partition, "2-adic cell profile of FS(D)")
    sp.add_argument("--set", required=True)

    for name, handler in (("katetov-verify", cmd_katetov_verify),
                          ("katetov-search", cmd_katetov_search)):
        sp = add(name, handler, "Katětov witness " + name.split("-")[1])
        sp.add_argument("--source", required=True)
        sp.add_argument("--target", required=True)
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--probes", help="'0;0,1' or a JSON file of arrays")
        g.add_argument("--all-probes", action="store_true")
        g.add_argument("--random-probes", type=int, default=200)
        if name == "katetov-verify":
            sp.add_argument("--map", required=True, help="value table or JSON file")
            sp.add_argument("--codomain", type=int)
        else:
            sp.add_argument("--N", type=int, required=True)
            sp.add_argument("--M", type=int, required=True)
            sp.add_argument("--family", choices=("all", "monotone"), default="all")
            sp.add_argument("--budget", type=int, default=1_000_000)

    sp = add("separate", cmd_separate, "separation engine")
    sp.add_argument("--coloring", required=True, help="log2, mod-N, block-N, ... or a JSON file")
    sp.add_argument("--domain", type=int, default=2**20)
    sp.add_argument("--stages", type=int, default=4)
    sp.add_argument("--schedule", help="a_0,a_1,... (default 4^(n+2)-1)")
    sp.add_argument("--depths", help="per-stage search depths")
    sp.add_argument("--fiber-depth", type=int, default=2)
    sp.add_argument("--out", help="also write the bare trace here")

    sp = add("verify-trace", cmd_verify_trace, "re-verify a serialized trace")
    sp.add_argument("trace")
    return p


def cli_run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        status, result = args.handler(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except RESOURCE_ERRORS as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (FsIdealsError, ValueError) as exc:
        print(f"{getattr(exc, 'code', 'invalid-input')}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(result, str):
        out.write(result)
        return status
    report = {"command": args.command, "version": __version__, "seed": args.seed,
              "threads": args.threads, "input_hash": _input_hash(args),
              "exit": status, "result": result}
    out.write(json.dumps(report, sort_keys=True) + "\n")
    return status


def main():
    sys.exit(cli_run())


if __name__ == "__main__":
    main()
