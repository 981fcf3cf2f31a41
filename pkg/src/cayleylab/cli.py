"""Command-line entry point: ``cayleylab <command> [options]``.

Exit status: 0 success, 2 usage error (including bad group specs),
3 parameter outside its domain, 4 enumeration guard exceeded.

CSV headers per command (fixed):

  exact           n,k,t,p_num,p_den,a,binom
  bounds          n,k,t_used,p_num,p_den,lower,upper,regime,exhaustive
  simulate        group_spec,n,k,trials,hits,point,ci_low,ci_high,seed
  asymptotics     regime,n,k,exact_value,rate_prediction,relative_error
  threshold-scan  t,k_star,upper_bound
  group-info      group_spec,order,abelian,elem_abelian_2,involutions,max_sqrt_num,max_sqrt_den
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import asymptotics as asym
from .bounds import CSV_COLUMNS, DiameterBoundReport, theorem1_report, theorem2_bounds
from .errors import FeasibilityError, GroupSpecError, PreconditionError
from .exactcomb import a_coeff_extract, binomial, p_from_a, p_incl_excl
from .groups import make_group, max_sqrt_ratio
from .montecarlo import (DEFAULT_SEED, EXHAUSTIVE_MAX_SUBSETS, estimate_coX,
                         estimate_pr_diam_gt2, exhaustive_pr_diam_gt2)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_FEASIBILITY = 4

COMMANDS = ("exact", "bounds", "simulate", "asymptotics", "threshold-scan", "group-info")


@dataclass
class RunConfig:
    command: str
    group_spec: str | None = None
    n: int | None = None
    k: int | None = None
    t: int | None = None
    c: float | None = None
    alpha: float | None = None
    d: int | None = None
    trials: int | None = None
    seed: int = DEFAULT_SEED
    output: str = "json"
    out_path: str | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ExactReport:
    n: int
    k: int
    t: int
    p: Fraction
    a: int
    binom: int

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "t": self.t, "p_num": self.p.numerator,
                "p_den": self.p.denominator, "a": self.a, "binom": self.binom}

    @classmethod
    def from_dict(cls, d: dict) -> "ExactReport":
        return cls(d["n"], d["k"], d["t"], Fraction(d["p_num"], d["p_den"]), d["a"], d["binom"])


class UsageError(Exception):
    pass


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [f"--{name}" for name in names if getattr(cfg, name) is None]
    if missing:
        raise UsageError(f"{cfg.command} requires {', '.join(missing)}")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(cfg: RunConfig, header, dict_rows, csv_rows) -> str:
    if cfg.output == "csv":
        return _csv(header, csv_rows)
    payload = dict_rows[0] if len(dict_rows) == 1 else {"rows": dict_rows}
    return json.dumps(payload) + "\n"


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def cmd_exact(cfg: RunConfig) -> str:
    _require(cfg, "n", "k", "t")
    p = p_incl_excl(cfg.n, cfg.k, cfg.t)
    if p != p_from_a(cfg.n, cfg.k, cfg.t):
        raise RuntimeError("inclusion-exclusion and coefficient routes disagree")
    rep = ExactReport(cfg.n, cfg.k, cfg.t, p, a_coeff_extract(cfg.n - 1, cfg.k, cfg.t),
                      binomial(cfg.n - 1, cfg.k))
    d = rep.to_dict()
    return _emit(cfg, list(d), [d], [list(d.values())])


def cmd_bounds(cfg: RunConfig) -> str:
    regime = cfg.extra.get("regime", "general")
    group = None
    if regime == "abelian":
        _require(cfg, "d")
        n = 1 << cfg.d
        group = make_group(f"Z2^{cfg.d}")
        make = lambda k: theorem2_bounds(cfg.d, k)
    else:
        if cfg.group_spec is not None:
            group = make_group(cfg.group_spec)
            if cfg.n is not None and cfg.n != group.order:
                raise PreconditionError(f"--n {cfg.n} does not match |{group.name}| = {group.order}")
            n = group.order
        else:
            _require(cfg, "n")
            n = cfg.n
        make = lambda k: theorem1_report(n, k, cfg.t)
    want_exhaustive = cfg.extra.get("exhaustive", False)
    if want_exhaustive and group is None:
        raise UsageError("--exhaustive needs --group (or --regime abelian)")
    ks = [cfg.k] if cfg.k is not None else list(range(1, n))
    dict_rows, csv_rows = [], []
    for k in ks:
        rep: DiameterBoundReport = make(k)
        d = rep.to_dict()
        ex = None
        if group is not None and (want_exhaustive or math.comb(n - 1, k) <= EXHAUSTIVE_MAX_SUBSETS):
            ex = exhaustive_pr_diam_gt2(group, k)
        if ex is not None:
            d.update(exhaustive_num=ex.numerator, exhaustive_den=ex.denominator,
                     contains=rep.contains(ex))
        dict_rows.append(d)
        csv_rows.append(rep.csv_row() + ["" if ex is None else str(ex)])
    return _emit(cfg, CSV_COLUMNS + ["exhaustive"], dict_rows, csv_rows)


def cmd_simulate(cfg: RunConfig) -> str:
    _require(cfg, "group_spec", "k", "trials")
    G = make_group(cfg.group_spec)
    y = cfg.extra.get("y")
    if y is None:
        est = estimate_pr_diam_gt2(G, cfg.k, cfg.trials, cfg.seed)
    else:
        est = estimate_coX(G, y, cfg.k, cfg.trials, cfg.seed)
    d = est.to_dict()
    return _emit(cfg, list(d), [d], [list(d.values())])


def cmd_asymptotics(cfg: RunConfig) -> str:
    regime = cfg.extra.get("regime", "linear")
    values = cfg.extra.get("values")
    if regime == "linear":
        _require(cfg, "c")
        rows = asym.linear_scan(cfg.c, values or [240, 480, 960, 1920])
    elif regime == "sublinear":
        _require(cfg, "alpha")
        rows = asym.sublinear_scan(cfg.alpha, values or [256, 1024, 4096])
    else:
        _require(cfg, "c")
        rows = asym.sqrt_scan(cfg.c, values or [10, 12, 14, 16])
    return _emit(cfg, asym.SCAN_COLUMNS, [r.to_dict() for r in rows], [r.csv_row() for r in rows])


def cmd_threshold_scan(cfg: RunConfig) -> str:
    t_min = cfg.extra.get("t_min", 1024)
    t_max = cfg.extra.get("t_max", 65536)
    if t_min < 2 or t_max < t_min:
        raise PreconditionError(f"need 2 <= t-min <= t-max, got {t_min}, {t_max}")
    ts, t = [], t_min
    while t <= t_max:
        ts.append(t)
        t *= 2
    rows = asym.threshold_scan(ts, cfg.extra.get("scale", 1.0), cfg.extra.get("refined", False))
    dicts = [{"t": r.t, "k_star": r.k, "upper_bound": r.upper_bound} for r in rows]
    return _emit(cfg, ["t", "k_star", "upper_bound"], dicts,
                 [[r.t, r.k, repr(r.upper_bound)] for r in rows])


def cmd_group_info(cfg: RunConfig) -> str:
    _require(cfg, "group_spec")
    G = make_group(cfg.group_spec)
    ratio = max_sqrt_ratio(G)
    d = {
        "group_spec": G.name, "order": G.order,
        "abelian": G.is_abelian if G.order <= 256 else None,
        "elem_abelian_2": G.is_elementary_abelian_2(),
        "involutions": int((G.squares == 0).sum()) - 1,
        "max_sqrt_num": ratio.numerator, "max_sqrt_den": ratio.denominator,
    }
    return _emit(cfg, list(d), [d], [list(d.values())])


HANDLERS = {
    "exact": cmd_exact,
    "bounds": cmd_bounds,
    "simulate": cmd_simulate,
    "asymptotics": cmd_asymptotics,
    "threshold-scan": cmd_threshold_scan,
    "group-info": cmd_group_info,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command; returns (exit status, emitted text or diagnostic)."""
    try:
        text = HANDLERS[cfg.command](cfg)
    except (UsageError, GroupSpecError) as exc:
        return EXIT_USAGE, f"usage error: {exc}"
    except FeasibilityError as exc:
        return EXIT_FEASIBILITY, f"enumeration guard: {exc}"
    except PreconditionError as exc:
        return EXIT_PRECONDITION, f"precondition violated: {exc}"
    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK, text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cayleylab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", choices=("csv", "json"), default="json")
        p.add_argument("--out", dest="out_path")
        return p

    p = common(sub.add_parser("exact", help="exact p(n,k,t) by two routes"))
    for name in ("n", "k", "t"):
        p.add_argument(f"--{name}", type=int)

    p = common(sub.add_parser("bounds", help="theorem brackets on Pr(Diam > 2)"))
    p.add_argument("--regime", choices=("general", "abelian"), default="general")
    for name in ("n", "k", "t", "d"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--group")
    p.add_argument("--exhaustive", action="store_true",
                   help="always compute the exhaustive Pr(Diam > 2); exit 4 past the size guard")

    p = common(sub.add_parser("simulate", help="Monte Carlo estimate of Pr(Diam > 2)"))
    p.add_argument("--group")
    p.add_argument("--k", type=int)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--y", type=int, help="estimate Pr(no length-2 path to y) instead")

    p = common(sub.add_parser("asymptotics", help="exact rates vs predicted rates"))
    p.add_argument("--regime", choices=("linear", "sublinear", "sqrt"), default="linear")
    p.add_argument("--c", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--values", help="comma-separated n values (d values for sqrt)")

    p = common(sub.add_parser("threshold-scan", help="abelian upper bound near k = 2 sqrt(t ln t)"))
    p.add_argument("--t-min", type=int, default=1024)
    p.add_argument("--t-max", type=int, default=65536)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--refined", action="store_true")

    p = common(sub.add_parser("group-info", help="order and square-root statistics"))
    p.add_argument("--group")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command, output=ns.output, out_path=ns.out_path)
    for name in ("n", "k", "t", "c", "alpha", "d", "trials", "seed"):
        if getattr(ns, name, None) is not None:
            setattr(cfg, name, getattr(ns, name))
    cfg.group_spec = getattr(ns, "group", None)
    for name in ("regime", "y", "t_min", "t_max", "scale", "refined", "exhaustive"):
        if getattr(ns, name, None) is not None:
            cfg.extra[name] = getattr(ns, name)
    if getattr(ns, "values", None):
        cfg.extra["values"] = _int_list(ns.values)
    return cfg


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    status, text = run(cfg)
    if status != EXIT_OK:
        print(text, file=sys.stderr)
    elif not cfg.out_path:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
