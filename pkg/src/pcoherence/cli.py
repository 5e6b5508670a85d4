"""Command line interface.

Exit status: 0 success, 2 negative verdict (inconsistent assessments,
invalid state), 64 unreadable input, 65 degree problems, 70 LP anomalies.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .coherence import (
    AssessmentSet,
    check_consistency,
    hierarchy,
    hierarchy_csv,
    lower_prevision,
    updated_lower_prevision,
    upper_prevision,
)
from .cone import SemiAlgebraicDomain
from .demos import DEFAULT_EPSILON, check_epsilon, demo_bell, demo_socks
from .errors import DegreeError, InfeasibleProgramError, InvalidStateError, UnboundedProgramError
from .moments import MomentState, expectation, is_valid_state
from .oracle import classical_oracle_prevision, grid_steps
from .polynomial import Polynomial

EXIT_OK = 0
EXIT_NEGATIVE = 2
EXIT_PARSE = 64
EXIT_DEGREE = 65
EXIT_LP = 70

SUBCOMMANDS = ("check", "prevision", "upper", "hierarchy", "update", "state-validate",
               "state-expect", "demo-bell", "demo-socks", "oracle")


class ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def fmt(v: Fraction | None) -> str:
    return "-" if v is None else str(v)


@dataclass
class RunConfig:
    subcommand: str
    gamble: Path | None = None
    gambles: Path | None = None
    pi: Path | None = None
    state: Path | None = None
    domain: Path | None = None
    degree: int | None = None
    dmin: int | None = None
    dmax: int | None = None
    epsilon: Fraction = DEFAULT_EPSILON
    grid_step: Fraction = Fraction(1, 32)
    out: Path | None = None
    as_json: bool = False
    strict: bool = False
    arbitrary_likelihood: bool = False
    extra: dict = field(default_factory=dict)


def _load(path: Path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}")


def _parse(path: Path, loader):
    data = _load(path)
    try:
        return loader(data)
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        if isinstance(exc, DegreeError):
            raise
        raise ParseError(f"{path}: {exc}")


def _gamble(cfg: RunConfig) -> Polynomial:
    if cfg.gamble is None:
        raise ParseError("--gamble is required")
    return _parse(cfg.gamble, Polynomial.from_dict)


def _assessments(cfg: RunConfig, n_vars: int | None) -> AssessmentSet:
    if cfg.gambles is None:
        if n_vars is None:
            raise ParseError("--gambles is required")
        return AssessmentSet(n_vars)
    G = _parse(cfg.gambles, AssessmentSet.from_dict)
    if n_vars is not None and G.n_vars != n_vars:
        raise ParseError("gamble and assessments disagree on n_vars")
    return G


def _domain(cfg: RunConfig):
    return None if cfg.domain is None else _parse(cfg.domain, SemiAlgebraicDomain.from_dict)


def _degree(cfg: RunConfig) -> int:
    if cfg.degree is None:
        raise ParseError("--degree is required")
    if cfg.degree < 1:
        raise DegreeError("degree must be at least 1")
    return cfg.degree


def _emit(cfg: RunConfig, text_lines: list[str], payload: dict, out):
    if cfg.as_json:
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")
    if cfg.out is not None and cfg.subcommand != "hierarchy":
        Path(cfg.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _cmd_check(cfg, out):
    G = _assessments(cfg, None)
    v = check_consistency(G, _degree(cfg), domain=_domain(cfg))
    if v.consistent:
        lines = [f"consistent at degree {v.degree}: -1 is not derivable"]
    else:
        lines = [f"INCONSISTENT at degree {v.degree}: -1 = sum lambda_i g_i + cone element",
                 "lambda = [" + ", ".join(str(x) for x in v.lambda_weights) + "]",
                 f"certificate = {json.dumps(v.certificate.to_dict())}"]
    _emit(cfg, lines, v.to_dict(), out)
    return EXIT_OK if v.consistent else EXIT_NEGATIVE


def _cmd_prevision(cfg, out, upper=False):
    q = _gamble(cfg)
    G = _assessments(cfg, q.n_vars)
    fn = upper_prevision if upper else lower_prevision
    res = fn(q, G, _degree(cfg), domain=_domain(cfg))
    name = "upper" if upper else "lower"
    lines = [f"{name} prevision at degree {res.degree_used}: {res.value} (~{float(res.value):.10g})"]
    _emit(cfg, lines, res.to_dict(), out)
    return EXIT_OK


def _cmd_hierarchy(cfg, out):
    q = _gamble(cfg)
    G = _assessments(cfg, q.n_vars)
    if cfg.dmin is None or cfg.dmax is None:
        raise ParseError("--dmin and --dmax are required")
    if cfg.dmin < 1:
        raise DegreeError("degree must be at least 1")
    rows = hierarchy(q, G, cfg.dmin, cfg.dmax, domain=_domain(cfg))
    text = hierarchy_csv(rows)
    if cfg.out is not None:
        Path(cfg.out).write_text(text)
    if cfg.as_json:
        out.write(json.dumps([{"d": d, "value": str(v), "value_float": float(v)} for d, v in rows],
                             indent=2) + "\n")
    else:
        out.write(text)
    return EXIT_OK


def _cmd_update(cfg, out):
    q = _gamble(cfg)
    if cfg.pi is None:
        raise ParseError("--pi is required")
    pi = _parse(cfg.pi, Polynomial.from_dict)
    G = _assessments(cfg, q.n_vars)
    res = updated_lower_prevision(q, pi, G, _degree(cfg), arbitrary_likelihood=cfg.arbitrary_likelihood,
                                  domain=_domain(cfg))
    if res.vacuous:
        lines = [f"updated lower prevision at degree {res.degree_used}: vacuous (no price is feasible)"]
    else:
        lines = [f"updated lower prevision at degree {res.degree_used}: {res.value}"]
    _emit(cfg, lines, res.to_dict(), out)
    return EXIT_OK


def _state(cfg) -> MomentState:
    if cfg.state is None:
        raise ParseError("--state is required")
    return _parse(cfg.state, MomentState.from_dict)


def _cmd_state_validate(cfg, out):
    L = _state(cfg)
    chk = is_valid_state(L, strict=cfg.strict)
    lines = [f"state valid: {chk.valid}"]
    lines += [f"  violated generator alpha = {a}: L = {chk.values[a]}" for a in chk.violations]
    payload = {"valid": chk.valid, "strict": cfg.strict, "violations": [list(a) for a in chk.violations]}
    _emit(cfg, lines, payload, out)
    return EXIT_OK if chk.valid else EXIT_NEGATIVE


def _cmd_state_expect(cfg, out):
    L = _state(cfg)
    p = _gamble(cfg)
    v = expectation(L, p)
    _emit(cfg, [f"L(p) = {v}"], {"value": str(v), "value_float": float(v)}, out)
    return EXIT_OK


def _cmd_oracle(cfg, out):
    q = _gamble(cfg)
    G = _assessments(cfg, q.n_vars)
    grid_steps(cfg.grid_step)
    res = classical_oracle_prevision(q, G, cfg.grid_step)
    lines = [f"grid ({res.grid_step}) classical lower prevision: {res.value} at theta = "
             + "(" + ", ".join(str(x) for x in res.point) + ")"]
    payload = {"value": str(res.value), "value_float": float(res.value),
               "point": [str(x) for x in res.point], "grid_step": str(res.grid_step)}
    _emit(cfg, lines, payload, out)
    return EXIT_OK


def _cmd_demo_bell(cfg, out):
    eps = check_epsilon(cfg.epsilon)
    rep = demo_bell(eps, cfg.extra.get("bell_grid", Fraction(1, 50)))
    payload = {
        "epsilon": str(rep.epsilon),
        "grid_step": str(rep.grid_step),
        "grid_max": str(rep.grid_max),
        "state_valid": rep.state_valid,
        "state_value": str(rep.state_value),
        "oracle_value": str(rep.oracle_value),
        "consistent_d2": rep.consistent_d2,
        "violated": rep.violated,
    }
    _emit(cfg, rep.lines(), payload, out)
    return EXIT_OK


def _cmd_demo_socks(cfg, out):
    rep = demo_socks(check_epsilon(cfg.epsilon))
    payload = {
        "epsilon": str(rep.epsilon),
        "cases": [{"q": ql, "pi": pl, "dual": str(a), "primal": str(b)} for ql, pl, a, b in rep.cases],
        "bell_value": str(rep.bell_value),
        "marginals": [str(v) for v in rep.marginals],
        "mixture_marginals": [str(v) for v in rep.mixture_marginals],
        "state_z011": str(rep.state_z011),
        "mixture_z011": str(rep.mixture_z011),
    }
    _emit(cfg, rep.lines(), payload, out)
    return EXIT_OK


_COMMANDS = {
    "check": _cmd_check,
    "prevision": _cmd_prevision,
    "upper": lambda cfg, out: _cmd_prevision(cfg, out, upper=True),
    "hierarchy": _cmd_hierarchy,
    "update": _cmd_update,
    "state-validate": _cmd_state_validate,
    "state-expect": _cmd_state_expect,
    "demo-bell": _cmd_demo_bell,
    "demo-socks": _cmd_demo_socks,
    "oracle": _cmd_oracle,
}


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return _COMMANDS[cfg.subcommand](cfg, out)
    except ParseError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except DegreeError as exc:
        err.write(f"degree error: {exc}\n")
        return EXIT_DEGREE
    except (UnboundedProgramError, InfeasibleProgramError) as exc:
        err.write(f"LP anomaly: {exc}\n")
        return EXIT_LP
    except (InvalidStateError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pcoherence", description="Exact P-coherence engine for polynomial gambles.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p, *, gamble=False, gambles=False, degree=False, domain=False):
        if gamble:
            p.add_argument("--gamble", type=Path, help="polynomial JSON")
        if gambles:
            p.add_argument("--gambles", type=Path, help="assessment set JSON (object or list of polynomials)")
        if degree:
            p.add_argument("--degree", "-d", type=int)
        if domain:
            p.add_argument("--domain", type=Path, help="general domain JSON; default is the simplex")
        p.add_argument("--json", dest="as_json", action="store_true", help="machine-readable output")
        p.add_argument("--out", type=Path)

    common(sub.add_parser("check", help="consistency of an assessment set"),
           gambles=True, degree=True, domain=True)
    common(sub.add_parser("prevision", help="lower prevision"), gamble=True, gambles=True, degree=True,
           domain=True)
    common(sub.add_parser("upper", help="upper prevision"), gamble=True, gambles=True, degree=True, domain=True)
    p = sub.add_parser("hierarchy", help="lower previsions over a degree range, as CSV")
    common(p, gamble=True, gambles=True, domain=True)
    p.add_argument("--dmin", type=int)
    p.add_argument("--dmax", type=int)
    p = sub.add_parser("update", help="updated lower prevision given a likelihood")
    common(p, gamble=True, gambles=True, degree=True, domain=True)
    p.add_argument("--pi", type=Path)
    p.add_argument("--arbitrary-likelihood", action="store_true",
                   help="accept any certified-nonnegative pi, not just partition subset sums")
    p = sub.add_parser("state-validate", help="check a moment state against the generators")
    common(p)
    p.add_argument("--state", type=Path)
    p.add_argument("--strict", action="store_true", help="also require extension to degrees d+1, d+2")
    p = sub.add_parser("state-expect", help="evaluate a moment state on a gamble")
    common(p, gamble=True)
    p.add_argument("--state", type=Path)
    p = sub.add_parser("oracle", help="classical lower prevision on a simplex grid")
    common(p, gamble=True, gambles=True)
    p.add_argument("--grid-step", type=_rational, default=Fraction(1, 32))
    p = sub.add_parser("demo-bell", help="Bell-type violation by a degree-2 state")
    common(p)
    p.add_argument("--epsilon", type=_rational, default=DEFAULT_EPSILON)
    p.add_argument("--grid-step", type=_rational, default=Fraction(1, 50))
    p = sub.add_parser("demo-socks", help="perfectly matched coins and the common-cause mismatch")
    common(p)
    p.add_argument("--epsilon", type=_rational, default=DEFAULT_EPSILON)
    return parser


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    sc = args.pop("subcommand")
    extra = {}
    if sc == "demo-bell":
        extra["bell_grid"] = args.pop("grid_step")
    cfg = RunConfig(sc, extra=extra, **args)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
