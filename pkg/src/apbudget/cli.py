"""Command line: ``apbudget {solve,axioms,experiment}``.

Exit codes: 0 success, 1 usage error, 2 parse or validation error, 3 resource
cap exceeded, 4 axiom audit disagrees with the expected matrix.  Every error
prints one ``error[CODE]: message`` line to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from apbudget import __version__
from apbudget.core import Approach, RuleSpec, parse_scenario
from apbudget.errors import BudgetingError, ResourceCapError
from apbudget.satisfaction import SatisfactionFnId
from apbudget.solvers import SolverConfig, solve

log = logging.getLogger("apbudget")

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_RESOURCE, EXIT_AUDIT = 0, 1, 2, 3, 4
VERSION = f"apbudget {__version__} rev1"

EXP1_X = (10, 30, 90, 190)
EXP2_X = (0, 10, 50, 70, 100)
EXP3_P = (0.0, 0.25, 0.5, 0.75, 1.0)
EXP3_LIMITS = (20, 30, 50)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    """Effective settings of one invocation, logged for reproducibility."""

    command: str
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None
    brute_cap: int = 24
    dp_cap: int = 10**6
    fpt_cap: int = 20
    out: Optional[str] = None

    def solver_config(self) -> SolverConfig:
        return SolverConfig(self.brute_cap, self.dp_cap, self.fpt_cap)


# -- argument parsing -------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--config", metavar="FILE", help="key = value file; flags override it")
    g.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads (default 1)")
    g.add_argument("--log-file", default=argparse.SUPPRESS, help="write a timestamped log here")
    g.add_argument("--brute-cap", type=int, default=argparse.SUPPRESS, help="max items for brute force (24)")
    g.add_argument("--dp-cap", type=int, default=argparse.SUPPRESS, help="max limit for the cost DP (10^6)")
    g.add_argument("--fpt-cap", type=int, default=argparse.SUPPRESS, help="max voters for the voter DP (20)")
    return p


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="apbudget", description="Approval-based budgeting rules, axioms and experiments.")
    parser.add_argument("--version", action="version", version=VERSION)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("solve", parents=[common], help="compute a winning budget")
    s.add_argument("--scenario", help="scenario file (canonical text format)")
    s.add_argument("--approach", choices=[a.value for a in Approach])
    s.add_argument("--satisfaction", choices=[f.value for f in SatisfactionFnId])
    s.add_argument("--strategy", choices=["brute", "bnb", "dp", "fpt"])
    s.add_argument("--epsilon", help="use the FPTAS with this epsilon (cost satisfaction only)")
    s.add_argument("--positive-gain-only", action="store_true", default=None, help="greedy rules skip zero-gain items")
    s.add_argument("--format", choices=["text", "kv"], default=None)

    a = sub.add_parser("axioms", parents=[common], help="audit the rule-by-axiom matrix")
    a.add_argument("--trials", type=int)
    a.add_argument("--seed", type=int)
    a.add_argument("--rule", action="append", help="restrict to a rule, e.g. max-cover (repeatable)")
    a.add_argument("--axiom", action="append", help="restrict to an axiom, e.g. merging (repeatable)")
    a.add_argument("--out", help="directory for witness files")

    e = sub.add_parser("experiment", parents=[common], help="run a Euclidean experiment")
    e.add_argument("which", nargs="?", choices=["one", "two", "three"])
    e.add_argument("--seed", type=int)
    e.add_argument("--reps", type=int)
    e.add_argument("--x", help="comma-separated parameter grid (experiments one and two)")
    e.add_argument("--p", help="comma-separated probabilities (experiment three)")
    e.add_argument("--limit", help="comma-separated budget limits (experiment three)")
    e.add_argument("--out", help="output directory")
    return parser


_DEFAULTS = {
    "threads": 1,
    "log_file": None,
    "brute_cap": 24,
    "dp_cap": 10**6,
    "fpt_cap": 20,
    "format": "text",
    "positive_gain_only": False,
    "trials": 200,
    "seed": 1,
    "reps": 20,
}


def read_config_file(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment; keys may use dashes or underscores."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc.strerror}") from None
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _coerce(key: str, raw: str, parser: argparse.ArgumentParser):
    for action in parser._actions:
        if action.dest != key:
            continue
        if isinstance(action, argparse._StoreTrueAction):
            if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(f"config key {key}: expected a boolean, got {raw!r}")
            return raw.lower() in ("true", "1", "yes")
        if isinstance(action, argparse._AppendAction):
            return [x.strip() for x in raw.split(",") if x.strip()]
        value = action.type(raw) if action.type else raw
        if action.choices and value not in action.choices:
            raise ValueError(f"config key {key}: {value!r} is not one of {list(action.choices)}")
        return value
    raise ValueError(f"unknown config key {key!r}")


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    ns = parser.parse_args(list(argv))
    if ns.command is None:
        raise UsageError("apbudget: a subcommand is required (solve, axioms, experiment)")
    if getattr(ns, "config", None):
        sub = parser._subparsers._group_actions[0].choices[ns.command]
        for key, raw in read_config_file(ns.config).items():
            value = _coerce(key, raw, sub)
            if getattr(ns, key, None) is None:
                setattr(ns, key, value)
    for key, value in _DEFAULTS.items():
        if getattr(ns, key, None) is None:
            setattr(ns, key, value)
    for key in ("threads", "brute_cap", "dp_cap", "fpt_cap"):
        if getattr(ns, key) < 1:
            raise ValueError(f"--{key.replace('_', '-')} must be >= 1")
    return ns


def _require(ns: argparse.Namespace, *names: str) -> None:
    missing = ["--" + n.replace("_", "-") for n in names if getattr(ns, n, None) is None]
    if missing:
        raise UsageError(f"apbudget {ns.command}: missing required option(s) {', '.join(missing)}")


# -- subcommands ------------------------------------------------------------

def _run_solve(ns, cfg: RunConfig, out) -> int:
    _require(ns, "scenario", "approach", "satisfaction")
    try:
        data = Path(ns.scenario).read_bytes()
    except OSError as exc:
        raise ValueError(f"cannot read scenario {ns.scenario}: {exc.strerror}") from None
    s = parse_scenario(data)
    rule = RuleSpec(Approach(ns.approach), SatisfactionFnId.from_name(ns.satisfaction), bool(ns.positive_gain_only))
    result = solve(s, rule, strategy=ns.strategy, epsilon=ns.epsilon, config=cfg.solver_config())
    ids = result.members
    if ns.format == "kv":
        out.write(f"rule={rule.name}\n")
        out.write(f"items={','.join(map(str, ids))}\n")
        out.write(f"total_cost={result.budget.total_cost}\n")
        out.write(f"total_satisfaction={result.value}\n")
        if result.trace:
            out.write("trace=" + ";".join(f"{a}:{g}" for a, g in result.trace) + "\n")
    else:
        out.write(f"rule {rule.name}\n")
        out.write("items " + " ".join(map(str, ids)) + "\n" if ids else "items\n")
        out.write(f"total_cost {result.budget.total_cost}\n")
        out.write(f"total_satisfaction {result.value}\n")
        for step, (a, g) in enumerate(result.trace, start=1):
            out.write(f"step {step} item {a} gain {g}\n")
    return EXIT_OK


def _run_axioms(ns, cfg: RunConfig, out, err) -> int:
    from apbudget.axioms import TABLE1, TABLE_AXIOMS, AxiomId, audit_matrix, render_matrix, write_witness
    from apbudget.solvers import BUILTIN_RULES, rule_from_name

    if ns.trials < 1:
        raise ValueError("--trials must be >= 1")
    rules = [rule_from_name(r) for r in ns.rule] if ns.rule else list(BUILTIN_RULES)
    axioms = [AxiomId.from_name(a) for a in ns.axiom] if ns.axiom else list(TABLE_AXIOMS)
    report = audit_matrix(ns.trials, ns.seed, rules, axioms, threads=ns.threads)
    out.write(render_matrix(report))
    out.write("\nrule,axiom,outcome,witness-file\n")
    for v in report.verdicts:
        path = ""
        if v.violated and ns.out:
            path = str(write_witness(v, Path(ns.out)))
        outcome = "violated" if v.violated else f"no-violation-in-{v.outcome.trials}"
        out.write(f"{v.rule.name},{v.axiom.value},{outcome},{path}\n")
    bad = report.mismatches()
    for v in bad:
        want = "hold" if TABLE1[(v.rule.name, v.axiom)] else "fail"
        err.write(f"error[E_AUDIT]: {v.rule.name} / {v.axiom.value}: expected the axiom to {want}, "
                  f"audit found {'a violation' if v.violated else 'none'}\n")
    return EXIT_AUDIT if bad else EXIT_OK


def _run_experiment(ns, cfg: RunConfig, out) -> int:
    from apbudget.experiments.generators import exp1_config, exp2_config, exp3_config
    from apbudget.experiments.output import write_grid_outputs

    _require(ns, "which", "out")
    if ns.reps < 1:
        raise ValueError("--reps must be >= 1")
    root = Path(ns.out)
    if ns.which in ("one", "two"):
        grid = _int_list(ns.x) if ns.x else list(EXP1_X if ns.which == "one" else EXP2_X)
        make = exp1_config if ns.which == "one" else exp2_config
        points = [(f"x{x}", "x", x, make(x)) for x in grid]
        summary = write_grid_outputs(root, points, ns.reps, ns.seed, ns.threads)
        out.write(summary)
        return EXIT_OK
    ps = _float_list(ns.p) if ns.p else list(EXP3_P)
    limits = _int_list(ns.limit) if ns.limit else list(EXP3_LIMITS)
    for limit in limits:
        points = [(f"p{p:g}", "p", p, exp3_config(p, limit)) for p in ps]
        out.write(f"# limit {limit}\n")
        out.write(write_grid_outputs(root / f"limit{limit}", points, ns.reps, ns.seed, ns.threads, local=True))
    return EXIT_OK


def _setup_logging(path: Optional[str]) -> None:
    log.handlers.clear()
    log.propagate = False
    if path:
        handler = logging.FileHandler(path)
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        log.addHandler(handler)
        log.setLevel(logging.INFO)
    else:
        log.addHandler(logging.NullHandler())


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = sys.argv[1:] if argv is None else argv
    try:
        try:
            ns = parse_args(argv)
        except SystemExit as exc:  # --help / --version
            return int(exc.code or 0)
        _setup_logging(ns.log_file)
        cfg = RunConfig(
            command=ns.command,
            params={k: v for k, v in vars(ns).items() if k not in ("command",)},
            seed=getattr(ns, "seed", None),
            brute_cap=ns.brute_cap,
            dp_cap=ns.dp_cap,
            fpt_cap=ns.fpt_cap,
            out=getattr(ns, "out", None),
        )
        log.info("version %s; config %s", VERSION, asdict(cfg))
        if ns.command == "solve":
            code = _run_solve(ns, cfg, out)
        elif ns.command == "axioms":
            code = _run_axioms(ns, cfg, out, err)
        else:
            code = _run_experiment(ns, cfg, out)
        log.info("exit %d", code)
        return code
    except UsageError as exc:
        err.write(f"error[E_USAGE]: {exc}\n")
        return EXIT_USAGE
    except ResourceCapError as exc:
        err.write(f"error[{exc.code}]: {exc}\n")
        return EXIT_RESOURCE
    except BudgetingError as exc:
        err.write(f"error[{exc.code}]: {exc}\n")
        return EXIT_INVALID
    except ValueError as exc:
        err.write(f"error[E_INVALID]: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
