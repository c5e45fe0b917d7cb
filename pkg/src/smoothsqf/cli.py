"""Command-line front end: parameter grids in, CSV or JSON reports out.

Numeric flags take comma-separated lists (``--p 101,211``) and scientific
notation (``--M 1e6``); the cartesian product of all lists is the grid.

Exit codes: 0 success, 2 an exact identity failed, 3 resource limit hit,
64 usage error.
"""

from __future__ import annotations

import argparse
import itertools
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

from . import congruences as cg
from . import kloosterman as kl
from . import lemma_lab as ll
from .arith import primes_between
from .characters import exceptional_prime_census, max_nonprincipal_sf_sum
from .errors import DomainError, IdentityViolation, ResourceError
from .report import to_csv, to_json
from .representatives import (
    booker_lower_bound,
    compute_M,
    compute_M_alpha_star,
    construct_thm13,
)
from .verify import DEFAULT_SEED, format_table, verify_suite

EXIT_OK, EXIT_IDENTITY, EXIT_RESOURCE, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_number(text: str) -> int | float:
    """``'1e6'`` -> 1000000, ``'0.35'`` -> 0.35; integral values become ints."""
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    if x == int(x) and abs(x) < 2**63 and not ("." in text and "e" not in text.lower()):
        return int(x)
    return x


def parse_list(text: str) -> list[int | float]:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("empty list")
    return [parse_number(t.strip()) for t in items]


@dataclass
class ExperimentConfig:
    subcommand: str
    grid: dict[str, list]
    seed: int = DEFAULT_SEED
    workers: int = 1
    output: str | None = None
    fmt: str = "csv"
    options: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for k, v in self.grid.items():
            if not v:
                raise UsageError(f"empty grid for {k}")

    def points(self) -> list[dict]:
        keys = sorted(self.grid)
        return [dict(zip(keys, vals)) for vals in itertools.product(*(self.grid[k] for k in keys))]

    def as_dict(self) -> dict:
        return {"subcommand": self.subcommand, "grid": self.grid, "seed": self.seed,
                "format": self.fmt, **self.options}


# ---------------------------------------------------------------------------
# tasks: each maps one grid point to (rows, summary or None)


def _report_row(r: cg.CountReport) -> dict:
    row = {"label": r.label, **r.parameters, "exact": r.exact_count, "main_term": r.main_term,
           "relative_deviation": r.relative_deviation, "error_bound": r.paper_error_bound,
           "flags": ";".join(r.flags)}
    return row


def task_mp_table(pt):
    t = compute_M(pt["p"])
    v = t.value
    row = {"p": pt["p"], "status": t.status.value, "M": v if v is None or v == math.inf else int(v),
           "exponent": t.exponent, "M_reduced": t.reduced_value}
    if row["M"] == math.inf:
        row["M"] = "inf"
    return [row], None


def _record_row(rec, **extra) -> dict:
    return {"q": rec.modulus, "a": rec.residue, **extra, "found": rec.found, "s": rec.s,
            "factorization": str(rec.factorization) if rec.factorization else "",
            "exponent": rec.exponent}


def task_malpha(pt):
    t = compute_M_alpha_star(pt["q"], pt["alpha"], pt["budget"])
    rows = [_record_row(r, alpha=pt["alpha"]) for r in t.records]
    summary = {"q": pt["q"], "alpha": pt["alpha"], "budget": pt["budget"], "y": t.smoothness_bound,
               "status": t.status.value, "value": t.value, "exponent": t.exponent,
               "uncovered": t.uncovered}
    return rows, summary


def task_thm13(pt):
    p, eps = pt["p"], pt["eps"]
    classes = [pt["a"]] if "a" in pt else range(1, p)
    rows = []
    for a in classes:
        c = construct_thm13(p, a, eps)
        rows.append(_record_row(c.record, eps=eps, l1=c.l1, l2=c.l2, u=c.u,
                                within_budget=c.record.found and c.record.s <= c.size_budget))
    found = [r for r in rows if r["found"]]
    c0 = construct_thm13(p, 1, eps)
    summary = {"p": p, "eps": eps, "L": c0.L, "K": c0.K, "classes": len(rows),
               "success_rate": len(found) / len(rows),
               "failures": [r["a"] for r in rows if not r["found"]],
               "max_exponent": max((r["exponent"] for r in found), default=None)}
    return rows, summary


def task_lower_bound(pt):
    r = booker_lower_bound(pt["K"])
    return [{"K": r.K, "modulus": r.modulus, "residue": r.residue, "p": r.p,
             "s_min": r.s_min, "ratio": r.ratio}], None


CONGRUENCES: dict[str, tuple[Callable, Callable, tuple[str, ...]]] = {
    "N": (cg.count_N, cg.count_N_naive, ("p", "a", "L", "h")),
    "Nsf": (cg.count_N_squarefree, cg.count_N_squarefree_naive, ("p", "a", "L", "h")),
    "Q": (cg.count_Q, cg.count_Q_naive, ("p", "a", "L", "h")),
    "T": (cg.count_T, cg.count_T_naive, ("p", "a", "U", "V")),
    "I": (cg.count_I, cg.count_I_naive, ("p", "r", "U", "lam")),
    "R": (cg.count_R, cg.count_R_naive, ("p", "a", "F", "L", "h")),
    "structured": (cg.count_structured_products, None, ("q", "a", "N", "zeta", "window_factor")),
}


def task_congruence(pt, kind: str, oracle: bool):
    fast, naive, names = CONGRUENCES[kind]
    args = [pt[n] for n in names]
    r = fast(*args)
    row = _report_row(r)
    if oracle:
        if kind == "structured":
            specs = cg.default_r_spec(pt["q"])
            expect = cg.count_structured_products_naive(*args, specs)
        else:
            expect = naive(*args)
        row["oracle"] = expect
        if expect != r.exact_count:
            raise IdentityViolation(f"{kind}: fast {r.exact_count} != oracle {expect} at {pt}")
    return [row], None


def task_char_census(pt):
    c = exceptional_prime_census(pt["Q"], pt["t"], pt["delta"])
    rows = [dict(zip(("Q", "t", "delta") + c.CSV_HEADER, (pt["Q"], pt["t"], pt["delta"]) + r))
            for r in c.csv_rows()]
    summary = {"Q": c.Q, "t": c.t, "delta": c.delta, "bound": c.bound, "gamma": c.gamma,
               "theta": c.theta, "violation_count": c.violation_count,
               "predicted_exceptional": c.predicted_exceptional, "violators": c.violators}
    return rows, summary


def task_char_max(pt):
    m = max_nonprincipal_sf_sum(pt["q"], pt["t"])
    return [{"q": m.modulus, "t": m.t, "max_abs": m.value, "character": list(m.exponents),
             "exponent_ratio": m.exponent_ratio}], None


def task_kl_sweep(pt):
    avg = kl.average_over_prime_moduli(pt["Q"], pt["L"])
    rows = [dict(zip(avg.CSV_HEADER, r)) for r in avg.csv_rows()]
    summary = {"Q": avg.Q, "L": avg.L, "total": avg.total,
               "ratio_to_bound": {f"k{k}": v for k, v in avg.ratios().items()}}
    return rows, summary


def task_kl_max(pt):
    p, L = pt["p"], pt["L"]
    a, mx = kl.max_over_residues(p, L)
    return [{"p": p, "L": L, "K": round(math.sqrt(abs(kl.all_residue_sums(p, L)[0]))),
             "argmax": a, "max_abs": mx, "parseval_lower": kl.parseval_lower_bound(p, L),
             "paper_bound": L**1.5 * p**0.125, "exponent_observed": kl.observed_exponent(mx, p, L)}], None


def task_kl_discrepancy(pt):
    p, a, L, H = pt["p"], pt["a"], pt["L"], pt["H"]
    return [{"p": p, "a": a, "L": L, "H": H,
             "discrepancy": kl.inverse_product_discrepancy(p, a, L),
             "erdos_turan": kl.erdos_turan_bound(p, a, L, H)}], None


LEMMAS = {
    "sqfap": (ll.sqfap_count, ("M", "q")),
    "ap": (ll.ap_upper_check, ("M", "q")),
    "smooth": (ll.smooth_lemma_census, ("N", "zeta", "d", "q")),
    "sums": (ll.sums_lemma_census, ("N", "zeta", "q")),
}


def task_lemma(pt, lemma: str):
    fn, names = LEMMAS[lemma]
    r = fn(*[pt[n] for n in names])
    row = _report_row(r)
    row["label"] = lemma
    if lemma == "ap":
        row["ratio"] = r.extras["ratio"]
    return [row], None


# ---------------------------------------------------------------------------
# argument parsing


def _num(p, name, default=None, required=False, help=None):
    p.add_argument(f"--{name}", type=parse_list, default=None if default is None else [default],
                   required=required and default is None, help=help)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="smoothsqf", description="Smooth square-free representatives: experiments.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", default=None, help="write here instead of stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--workers", type=int, default=1, help="overridden by RS_THREADS")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mp-table", parents=[common], help="M(p) for primes in a range")
    p.add_argument("--pmin", type=parse_number, required=True)
    p.add_argument("--pmax", type=parse_number, required=True)

    p = sub.add_parser("malpha", parents=[common], help="per-class minima for M*_alpha(q)")
    _num(p, "q", required=True)
    _num(p, "alpha", required=True)
    _num(p, "budget", required=True)

    p = sub.add_parser("thm13", parents=[common], help="l1 l2 u construction for every class")
    _num(p, "p", required=True)
    _num(p, "eps", 0.1)
    _num(p, "a", help="single class (default: all)")

    p = sub.add_parser("lower-bound", parents=[common], help="primes with large least s == 4")
    _num(p, "K", required=True)

    p = sub.add_parser("congruence", parents=[common], help="exact congruence counts")
    p.add_argument("kind", choices=sorted(CONGRUENCES))
    p.add_argument("--oracle", action="store_true", help="compare with the naive loop")
    for name in ("p", "q", "a", "L", "h", "U", "V", "r", "F", "N", "zeta"):
        _num(p, name)
    _num(p, "lam", 0)
    _num(p, "window_factor", ll.PSI)

    p = sub.add_parser("characters", parents=[common], help="square-free character sums")
    p.add_argument("mode", choices=("census", "max"))
    for name in ("Q", "t", "delta", "q"):
        _num(p, name)

    p = sub.add_parser("kloosterman", parents=[common], help="double Kloosterman sums")
    p.add_argument("mode", choices=("sweep", "max", "discrepancy"))
    for name in ("Q", "L", "p", "a", "H"):
        _num(p, name)

    p = sub.add_parser("lemma-lab", parents=[common], help="short-interval counts vs main terms")
    p.add_argument("lemma", choices=sorted(LEMMAS))
    for name in ("M", "N", "zeta"):
        _num(p, name)
    _num(p, "q", 1)
    _num(p, "d", 1)

    sub.add_parser("verify", parents=[common], help="run every exact identity check")
    return parser


REQUIRED = {
    ("characters", "census"): ("Q", "t", "delta"),
    ("characters", "max"): ("q", "t"),
    ("kloosterman", "sweep"): ("Q", "L"),
    ("kloosterman", "max"): ("p", "L"),
    ("kloosterman", "discrepancy"): ("p", "a", "L", "H"),
}


def _grid(ns, names) -> dict[str, list]:
    grid = {}
    for n in names:
        v = getattr(ns, n, None)
        if v is None:
            raise UsageError(f"--{n} is required")
        grid[n] = v
    return grid


def config_from_args(ns) -> tuple[ExperimentConfig, Callable]:
    cmd = ns.command
    opts: dict[str, Any] = {}
    if cmd == "mp-table":
        grid = {"p": [int(p) for p in primes_between(int(ns.pmin), int(ns.pmax))]}
        if not grid["p"]:
            raise UsageError("no primes in range")
        task = task_mp_table
    elif cmd == "malpha":
        grid, task = _grid(ns, ("q", "alpha", "budget")), task_malpha
    elif cmd == "thm13":
        grid = _grid(ns, ("p", "eps"))
        if ns.a is not None:
            grid["a"] = ns.a
        task = task_thm13
    elif cmd == "lower-bound":
        grid, task = _grid(ns, ("K",)), task_lower_bound
    elif cmd == "congruence":
        names = CONGRUENCES[ns.kind][2]
        grid = _grid(ns, names)
        opts = {"kind": ns.kind, "oracle": ns.oracle}
        task = _Bound(task_congruence, ns.kind, ns.oracle)
    elif cmd == "characters":
        grid = _grid(ns, REQUIRED[(cmd, ns.mode)])
        opts = {"mode": ns.mode}
        task = task_char_census if ns.mode == "census" else task_char_max
    elif cmd == "kloosterman":
        grid = _grid(ns, REQUIRED[(cmd, ns.mode)])
        opts = {"mode": ns.mode}
        task = {"sweep": task_kl_sweep, "max": task_kl_max, "discrepancy": task_kl_discrepancy}[ns.mode]
    elif cmd == "lemma-lab":
        grid = _grid(ns, LEMMAS[ns.lemma][1])
        opts = {"lemma": ns.lemma}
        task = _Bound(task_lemma, ns.lemma)
    else:  # pragma: no cover
        raise UsageError(cmd)
    workers = ns.workers
    if os.environ.get("RS_THREADS"):
        try:
            workers = int(os.environ["RS_THREADS"])
        except ValueError:
            raise UsageError("RS_THREADS must be an integer") from None
    cfg = ExperimentConfig(cmd, grid, ns.seed, max(workers, 1), ns.output, ns.format, opts)
    return cfg, task


class _Bound:
    """Picklable partial application for the process pool."""

    def __init__(self, fn, *args):
        self.fn, self.args = fn, args

    def __call__(self, pt):
        return self.fn(pt, *self.args)


def run(cfg: ExperimentConfig, task: Callable) -> str:
    """Evaluate the grid and render the report; results keep grid order."""
    points = cfg.points()
    if cfg.workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            outputs = list(pool.map(task, points))
    else:
        outputs = [task(pt) for pt in points]
    rows = [r for out, _ in outputs for r in out]
    if cfg.fmt == "json":
        if all(s is not None for _, s in outputs):
            results = [dict(s, records=out) for out, s in outputs]
        else:
            results = rows
        return to_json(cfg.as_dict(), results)
    header: list[str] = []
    for r in rows:
        header.extend(k for k in r if k not in header)
    return to_csv(header, ([r.get(k, "") for k in header] for r in rows))


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_verify(ns) -> int:
    results = verify_suite(ns.seed)
    if ns.format == "json":
        text = to_json({"subcommand": "verify", "seed": ns.seed},
                       [{"check": r.name, "passed": r.passed, "detail": r.detail} for r in results])
    else:
        text = format_table(results)
    _emit(text, ns.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_IDENTITY


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # --help exits 0, parse errors exit 64
        return int(exc.code or 0)
    try:
        if ns.command == "verify":
            return run_verify(ns)
        cfg, task = config_from_args(ns)
        _emit(run(cfg, task), cfg.output)
        return EXIT_OK
    except UsageError as exc:
        print(f"smoothsqf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"smoothsqf: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IdentityViolation as exc:
        print(f"smoothsqf: identity violated: {exc}", file=sys.stderr)
        return EXIT_IDENTITY
    except ResourceError as exc:
        print(f"smoothsqf: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
