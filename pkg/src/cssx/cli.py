"""Command-line interface: ``cssx select|bench|oracle|probe``.

Reports are single JSON objects on stdout with 1-based column indices.
Logs go to stderr.
"""

import argparse
import json
import logging
import sys
import time

import numpy as np

from . import generators
from .cssp import CsspConfig, boost
from .exceptions import (
    AllTrialsFailedError,
    BudgetExceededError,
    CsspError,
    SampleRankLossError,
)
from .harness import CHECKS, run_experiment
from .io import read_matrix
from .linalg import projection_residual, svd
from .oracle import DEFAULT_BUDGET, exhaustive_best
from .sampling import CMode, hybrid_probabilities, leverage_probabilities

log = logging.getLogger("cssx")

EXIT_INPUT = 1
EXIT_SAMPLING = 2
EXIT_BUDGET = 3

NORMS = {"fro": "frobenius", "spec": "spectral"}
PROBS = {"hybrid": "hybrid", "leverage": "leverage_only"}


def _emit(obj, out=None):
    out = out or sys.stdout
    out.write(json.dumps(obj, indent=2, allow_nan=False))
    out.write("\n")
    out.flush()


def _add_input(p, required=True):
    p.add_argument("--input", required=required, help="matrix file")
    p.add_argument("--format", choices=["mm", "csv"], default=None,
                   help="file format (default: from suffix, .mtx/.mm -> mm, else csv)")


def _add_algorithm(p):
    p.add_argument("--k", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--c", type=int, help="explicit number of sampling trials")
    g.add_argument("--c-mode", choices=["theoretical", "practical"], default="practical")
    p.add_argument("--c0", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=4.0)
    p.add_argument("--f", type=float, default=np.sqrt(2.0))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prob", choices=sorted(PROBS), default="hybrid")
    p.add_argument("--norm", choices=sorted(NORMS), default="fro")


def _config(args, boost_trials=1):
    if args.c is not None:
        mode = CMode.explicit(args.c)
    else:
        mode = CMode(args.c_mode, c0=args.c0, alpha=args.alpha)
    return CsspConfig(
        k=args.k,
        c_mode=mode,
        f=args.f,
        seed=args.seed,
        prob_kind=PROBS[args.prob],
        boost_trials=boost_trials,
        norm=NORMS[args.norm],
    )


def _parse_selection(text):
    try:
        picked = [int(tok) - 1 for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"bad --selection {text!r}; expected comma-separated integers") from None
    return picked


def cmd_select(args):
    a = read_matrix(args.input, args.format)
    start = time.perf_counter()
    result = boost(a, _config(args, boost_trials=args.boost))
    out = result.to_dict()
    out["timings"] = {"seconds": time.perf_counter() - start}
    _emit(out)
    return 0


def cmd_oracle(args):
    a = read_matrix(args.input, args.format)
    norm = NORMS[args.norm]
    best = exhaustive_best(a, args.k, norm, budget=args.budget)
    out = {
        "selected": [i + 1 for i in best.selected],
        "norm": norm,
        "residual": best.residual,
        "residual_fro": projection_residual(a, best.selected, "frobenius"),
        "residual_spec": projection_residual(a, best.selected, "spectral"),
        "evaluated": best.evaluated,
        "algorithm_residual": None,
        "ratio": None,
    }
    if args.selection:
        picked = _parse_selection(args.selection)
        alg = projection_residual(a, picked, norm)
        out["algorithm_residual"] = alg
        if best.residual > 0.0:
            out["ratio"] = alg / best.residual
        elif alg == 0.0:
            out["ratio"] = 1.0
    _emit(out)
    return 0


def cmd_probe(args):
    a = read_matrix(args.input, args.format)
    factors = svd(a)
    if PROBS[args.prob] == "hybrid":
        probs = hybrid_probabilities(a, factors, args.k)
    else:
        probs = leverage_probabilities(factors, args.k)
    _emit({"k": args.k, "rank": factors.rank, "kind": probs.kind, "p": probs.p.tolist()})
    return 0


def cmd_bench(args):
    if args.input:
        a = read_matrix(args.input, args.format)
        descriptor = {"source": str(args.input), "generator": None, "generator_seed": None}
    else:
        a = generators.from_spec(args.gen, args.gen_seed)
        descriptor = {"source": None, "generator": args.gen, "generator_seed": args.gen_seed}
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    report = run_experiment(
        a, _config(args), args.trials, checks=checks, descriptor=descriptor, budget=args.budget
    )
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            _emit(report, fh)
    else:
        _emit(report)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="cssx", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select", help="select exactly k columns")
    _add_input(p)
    _add_algorithm(p)
    p.add_argument("--boost", type=int, default=1, help="independent runs; keep the best")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("bench", help="seeded statistical checks of the guarantees")
    _add_input(p, required=False)
    p.add_argument("--gen", default="gaussian:30x20",
                   help="generator when --input is absent: gaussian:MxN or lowrank:MxN:R[:NOISE]")
    p.add_argument("--gen-seed", type=int, default=0)
    _add_algorithm(p)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--checks", default="lemma1,tail_energy,lemma4,bounds",
                   help=f"comma-separated subset of {','.join(CHECKS)}")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--output", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="exhaustive best k-subset")
    _add_input(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--norm", choices=sorted(NORMS), default="fro")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--selection", help="1-based comma-separated columns to compare against")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("probe", help="print the column sampling probabilities")
    _add_input(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--prob", choices=sorted(PROBS), default="hybrid")
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    except (SampleRankLossError, AllTrialsFailedError) as exc:
        log.error("%s", exc)
        return EXIT_SAMPLING
    except (CsspError, ValueError, TypeError, OSError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
