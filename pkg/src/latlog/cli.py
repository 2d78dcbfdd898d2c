"""Command-line front end.

Every command reads a lattice (a file path or a bundled name), runs one
operation and writes a report either as text or as JSON with the same fields
in the same order.  Exit codes: 0 for YES/valid/success, 1 for NO/invalid,
2 for UNKNOWN (budget), 3 for input errors.  Budgets can also be set through
environment variables (LATLOG_VAR_CAP, LATLOG_LEVEL_CAP, LATLOG_MAX_N,
LATLOG_DOMAIN_CAP); explicit flags win.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .algebra import (
    Lattice,
    derive_residuum,
    format_lattice_source,
    implication_mode_disagreements,
    load_lattice,
    parse_frame_source,
    upset_lattice,
)
from .bundled import BUNDLED, bundled_source
from .errors import (
    BudgetExceeded,
    LatlogError,
    NotValidError,
    PropInterpolationFailed,
    UnknownValidity,
)
from .folift import (
    FoBudgets,
    check_valid_expansion,
    expand_n,
    find_herbrand_expansion,
    fo_interpolate,
    skolemize,
)
from .interp import (
    decide_interpolation,
    find_prop_interpolant,
    spectrum,
)
from .propcore import (
    ClosureBudget,
    constant_values,
    eval_prop,
    is_valid_prop,
    representable_closure,
)
from .syntax import parse_formula, render

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    lattice: Optional[str] = None
    formulas: list[str] = field(default_factory=list)
    var_cap: int = 10
    level_cap: Optional[int] = None
    max_n: int = 8
    domain_cap: int = 2
    k: Optional[int] = None
    mode: str = "godel"
    connectives: Optional[list[str]] = None
    variables: list[str] = field(default_factory=list)
    assignment: dict[str, str] = field(default_factory=dict)
    n: int = 1
    frame: Optional[str] = None
    out_lattice: Optional[str] = None
    output: Optional[str] = None
    fmt: str = "text"
    seed: int = 2024


def _env_int(name: str, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise LatlogError(f"environment variable {name} must be an integer, got {raw!r}")


def _load_lattice_arg(spec: str) -> Lattice:
    path = Path(spec)
    if path.exists():
        return load_lattice(path.read_text())
    if spec in BUNDLED:
        return load_lattice(bundled_source(spec))
    raise LatlogError(
        f"no lattice file {spec!r} and no bundled lattice of that name "
        f"(bundled: {', '.join(BUNDLED)})"
    )


def _render_value(value, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.extend(_render_value(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return lines
    if isinstance(value, list):
        lines = []
        for v in value:
            if isinstance(v, dict):
                sub = _render_value(v, indent + 1)
                if sub:
                    lines.append(f"{pad}- {sub[0].lstrip()}")
                    lines.extend(sub[1:])
            elif isinstance(v, list):
                lines.extend(_render_value(v, indent))
            else:
                lines.append(f"{pad}- {v}")
        return lines
    return [f"{pad}{value}"]


def emit(report: dict, config: RunConfig) -> None:
    if config.fmt == "json":
        text = json.dumps(report, indent=2)
    else:
        text = "\n".join(_render_value(report, 0))
    if config.output:
        Path(config.output).write_text(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# command handlers; each returns (exit code, report)


def cmd_validate(config: RunConfig) -> tuple[int, dict]:
    try:
        lat = _load_lattice_arg(config.lattice)
    except LatlogError as exc:
        if exc.code in ("PARSE_ERROR", "UNKNOWN_SYMBOL", "ERROR"):
            raise
        return EXIT_NO, {
            "command": "validate", "status": "invalid",
            "code": exc.code, "message": exc.message,
            "details": {k: _plain(v) for k, v in exc.details.items()},
        }
    return EXIT_YES, {
        "command": "validate", "status": "valid",
        "elements": list(lat.elements),
        "top": lat.elements[lat.top],
        "connectives": [f"{c.name}/{c.arity} {''.join(c.polarity) or '()'}"
                        for c in lat.signature.connectives],
        "constants": {k: lat.elements[v] for k, v in lat.constants.items()},
    }


def cmd_eval(config: RunConfig) -> tuple[int, dict]:
    lat = _load_lattice_arg(config.lattice)
    phi = parse_formula(config.formulas[0], lat.signature)
    value = eval_prop(phi, lat, config.assignment)
    return EXIT_YES, {
        "command": "eval", "formula": render(phi),
        "assignment": dict(sorted(config.assignment.items())),
        "value": value,
    }


def cmd_valid(config: RunConfig) -> tuple[int, dict]:
    lat = _load_lattice_arg(config.lattice)
    phi = parse_formula(config.formulas[0], lat.signature)
    report = is_valid_prop(phi, lat, config.var_cap)
    out = {
        "command": "valid", "formula": render(phi),
        "status": "valid" if report.valid else "invalid",
        "checked": report.checked, "method": report.method,
    }
    if report.countervaluation:
        out["countervaluation"] = report.countervaluation
    return (EXIT_YES if report.valid else EXIT_NO), out


def cmd_closure(config: RunConfig) -> tuple[int, dict]:
    lat = _load_lattice_arg(config.lattice)
    clo = representable_closure(lat, config.variables, level_cap=config.level_cap,
                                budget=ClosureBudget(),
                                connectives=config.connectives)
    rows = [
        {"values": " ".join(c.value_names(lat)), "witness": c.word, "level": c.level}
        for c in clo.columns
    ]
    out = {
        "command": "closure", "variables": list(config.variables),
        "connectives": list(clo.connectives),
        "complete": clo.complete,
        "columns": len(clo.columns),
        "cumulative": clo.cumulative,
        "added_per_level": clo.added,
        "table": rows,
    }
    if clo.budget_note:
        out["budget_note"] = clo.budget_note
    return (EXIT_YES if clo.complete else EXIT_UNKNOWN), out


def cmd_constants(config: RunConfig) -> tuple[int, dict]:
    lat = _load_lattice_arg(config.lattice)
    values = constant_values(lat)
    return EXIT_YES, {
        "command": "constants",
        "values": {elt: render(wit) for elt, wit in values.items()},
        "count": len(values),
        "all_values": set(values) == set(lat.elements),
    }


def cmd_interpolate(config: RunConfig) -> tuple[int, dict]:
    lat = _load_lattice_arg(config.lattice)
    a = parse_formula(config.formulas[0], lat.signature)
    b = parse_formula(config.formulas[1], lat.signature)
    verdict = find_prop_interpolant(a, b, lat, var_cap=config.var_cap)
    out = {
        "command": "interpolate",
        "antecedent": render(a), "succedent": render(b),
        "status": verdict.status,
        "shared": list(verdict.shared),
        "lower_envelope": " ".join(verdict.lower.value_names(lat)),
        "upper_envelope": " ".join(verdict.upper.value_names(lat)),
    }
    if verdict.status == "YES":
        out["interpolant"] = verdict.interpolant_word
    if verdict.status == "NO":
        out["closure_complete"] = verdict.closure_complete
        out["closure"] = [
            {"values": " ".join(c.value_names(lat)), "witness": c.word}
            for c in verdict.closure_columns
        ]
    if verdict.budget_note:
        out["budget_note"] = verdict.budget_note
    code = {"YES": EXIT_YES, "NO": EXIT_NO, "UNKNOWN": EXIT_UNKNOWN}[verdict.status]
    return code, out


def cmd_decide(config: RunConfig) -> tuple[int, dict]:
    lat = _load_lattice_arg(config.lattice)
    report = decide_interpolation(lat, k=config.k)
    out = {
        "command": "decide", "status": report.status, "path": report.path,
        "constant_values": list(report.constant_values),
        "k": report.k, "complete": report.complete,
        "pairs_checked": report.pairs_checked,
    }
    if report.witness_pair:
        out["witness_antecedent"] = render(report.witness_pair[0])
        out["witness_succedent"] = render(report.witness_pair[1])
    if report.sample_interpolant is not None:
        out["sample_interpolant"] = render(report.sample_interpolant)
    if report.notes:
        out["notes"] = report.notes
    code = {"YES": EXIT_YES, "NO": EXIT_NO, "UNKNOWN": EXIT_UNKNOWN}[report.status]
    return code, out


def cmd_spectrum(config: RunConfig) -> tuple[int, dict]:
    lat = _load_lattice_arg(config.lattice)
    report = spectrum(lat, k=config.k)
    entries = []
    for subset, status in report.entries.items():
        entries.append({
            "subset": "{" + ", ".join(sorted(subset)) + "}",
            "status": status,
            "path": report.reports[subset].path,
        })
    entries.sort(key=lambda e: (e["subset"].count(",") if e["subset"] != "{}" else -1,
                                e["subset"]))
    any_unknown = any(e["status"] == "UNKNOWN" for e in entries)
    out = {
        "command": "spectrum", "elements": list(lat.elements),
        "k": config.k if config.k is not None else lat.m,
        "entries": entries,
    }
    return (EXIT_UNKNOWN if any_unknown else EXIT_YES), out


def cmd_skolemize(config: RunConfig) -> tuple[int, dict]:
    lat = _load_lattice_arg(config.lattice)
    phi = parse_formula(config.formulas[0], lat.signature)
    result, record = skolemize(phi, lat)
    return EXIT_YES, {
        "command": "skolemize",
        "input": render(phi),
        "output": render(result),
        "family_size": record.family_size,
        "replacements": [
            {"path": list(e.path), "quantifier": e.quantifier, "variable": e.variable,
             "functions": list(e.functions), "arguments": list(e.arguments)}
            for e in record.entries
        ],
    }


def cmd_expand(config: RunConfig) -> tuple[int, dict]:
    lat = _load_lattice_arg(config.lattice)
    phi = parse_formula(config.formulas[0], lat.signature)
    expansion = expand_n(phi, config.n, signature=lat.signature)
    check = check_valid_expansion(expansion, lat, config.var_cap)
    return (EXIT_YES if check.valid else EXIT_NO), {
        "command": "expand", "n": config.n,
        "input": render(phi),
        "expansion": render(expansion),
        "valid": check.valid,
        "atoms": check.atom_names,
        **({"countermodel": check.countermodel} if check.countermodel else {}),
    }


def cmd_herbrand(config: RunConfig) -> tuple[int, dict]:
    lat = _load_lattice_arg(config.lattice)
    phi = parse_formula(config.formulas[0], lat.signature)
    search = find_herbrand_expansion(phi, lat, max_n=config.max_n, var_cap=config.var_cap)
    out = {
        "command": "herbrand", "input": render(phi),
        "status": search.status,
        "terms": [str(t) for t in search.terms],
        "checks": [{"n": n, "valid": ok} for n, ok in search.checks],
    }
    if search.added_constant:
        out["added_constant"] = search.added_constant
    if search.exhausted_at is not None:
        out["terms_exhausted_at"] = search.exhausted_at
    if search.status == "FOUND":
        out["n"] = search.n
        out["expansion"] = render(search.expansion)
        return EXIT_YES, out
    out["reason"] = search.reason
    return EXIT_UNKNOWN, out


def cmd_fo_interpolate(config: RunConfig) -> tuple[int, dict]:
    lat = _load_lattice_arg(config.lattice)
    phi = parse_formula(config.formulas[0], lat.signature)
    budgets = FoBudgets(max_n=config.max_n, var_cap=config.var_cap,
                        smoke_domain_cap=config.domain_cap)
    try:
        result = fo_interpolate(phi, lat, budgets)
    except UnknownValidity as exc:
        return EXIT_UNKNOWN, {
            "command": "fo-interpolate", "input": render(phi),
            "status": "UNKNOWN", "reason": exc.message,
            **_trace_report(exc.trace, lat),
        }
    except PropInterpolationFailed as exc:
        status = exc.verdict.status if exc.verdict else "NO"
        code = EXIT_UNKNOWN if status == "UNKNOWN" else EXIT_NO
        return code, {
            "command": "fo-interpolate", "input": render(phi),
            "status": status, "reason": exc.message,
            **_trace_report(exc.trace, lat),
        }
    trace = result.trace
    out = {
        "command": "fo-interpolate", "input": render(phi),
        "status": "YES",
        "interpolant": render(result.interpolant),
        **_trace_report(trace, lat),
    }
    return EXIT_YES, out


def _trace_report(trace, lat) -> dict:
    if trace is None:
        return {}
    out: dict = {"trace": {}}
    t = out["trace"]
    if trace.skolemized is not None:
        t["skolemized"] = render(trace.skolemized)
        t["skolem_functions"] = [
            {"quantifier": e.quantifier, "functions": list(e.functions)}
            for e in trace.skolem_record.entries
        ]
    if trace.herbrand is not None and trace.herbrand.n is not None:
        t["expansion_n"] = trace.herbrand.n
        t["expansion"] = render(trace.herbrand.expansion)
    if trace.abstraction:
        t["abstraction"] = dict(trace.abstraction)
    if trace.verdict is not None:
        t["prop_status"] = trace.verdict.status
        if trace.verdict.interpolant_word:
            t["prop_interpolant"] = trace.verdict.interpolant_word
    if trace.ground_interpolant is not None:
        t["ground_interpolant"] = render(trace.ground_interpolant)
    if trace.generalization:
        t["generalization"] = [
            {"term": str(s.term), "variable": s.variable, "quantifier": s.quantifier}
            for s in trace.generalization
        ]
    if trace.smoke:
        t["smoke_test"] = trace.smoke
    if trace.notes:
        t["notes"] = list(trace.notes)
    return out


def cmd_kripke(config: RunConfig) -> tuple[int, dict]:
    frame = parse_frame_source(Path(config.frame).read_text())
    lat = upset_lattice(frame, config.mode)
    disagreements = implication_mode_disagreements(frame)
    out = {
        "command": "kripke", "worlds": list(frame.worlds),
        "mode": config.mode,
        "elements": list(lat.elements),
        "lattice": format_lattice_source(lat).splitlines(),
        "mode_disagreements": [
            {"u": u, "v": v, "heyting": h, "godel": g}
            for u, v, h, g in disagreements
        ],
    }
    if config.out_lattice:
        Path(config.out_lattice).write_text(format_lattice_source(lat))
        out["written"] = config.out_lattice
    return EXIT_YES, out


def cmd_residuum(config: RunConfig) -> tuple[int, dict]:
    lat = _load_lattice_arg(config.lattice)
    report = derive_residuum(lat)
    if report.residuated:
        return EXIT_YES, {
            "command": "residuum", "status": "residuated",
            "table": [" ".join(row) for row in report.table],
        }
    out = {
        "command": "residuum", "status": "NOT_RESIDUATED",
        "failing_pair": list(report.failing_pair),
    }
    if report.cases:
        out["cases"] = [
            {"candidate": c.candidate, "law": c.law, "detail": c.detail}
            for c in report.cases
        ]
    if report.law_violation:
        out["law_violation"] = {k: _plain(v) for k, v in report.law_violation.items()}
    return EXIT_NO, out


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    return v


HANDLERS = {
    "validate": cmd_validate,
    "eval": cmd_eval,
    "valid": cmd_valid,
    "closure": cmd_closure,
    "constants": cmd_constants,
    "interpolate": cmd_interpolate,
    "decide": cmd_decide,
    "spectrum": cmd_spectrum,
    "skolemize": cmd_skolemize,
    "expand": cmd_expand,
    "herbrand": cmd_herbrand,
    "fo-interpolate": cmd_fo_interpolate,
    "kripke": cmd_kripke,
    "residuum": cmd_residuum,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latlog",
        description="Workbench for finitely-valued lattice-based logics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, lattice: bool = True):
        p = sub.add_parser(name, help=help_text)
        if lattice:
            p.add_argument("--lattice", required=True,
                           help="lattice file path or bundled name")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", help="write the report to this file")
        p.add_argument("--var-cap", type=int, default=None,
                       help="validity sweep variable cap (default 10)")
        p.add_argument("--seed", type=int, default=2024)
        return p

    add("validate", "check every lattice axiom")

    p = add("eval", "evaluate a propositional word")
    p.add_argument("--formula", required=True)
    p.add_argument("--assign", required=True,
                   help="comma-separated assignment, e.g. x=1,y=a")

    p = add("valid", "exhaustive validity check")
    p.add_argument("--formula", required=True)

    p = add("closure", "representable-function closure")
    p.add_argument("--vars", default="", help="comma-separated variable names")
    p.add_argument("--level-cap", type=int, default=None)
    p.add_argument("--connectives", default=None,
                   help="restrict to these connectives, comma-separated")

    add("constants", "values of closed words")

    p = add("interpolate", "propositional interpolant search")
    p.add_argument("antecedent")
    p.add_argument("succedent")

    p = add("decide", "decide the interpolation property")
    p.add_argument("--k", type=int, default=None,
                   help="bounded mode: at most k variables per group")

    p = add("spectrum", "interpolation verdict for every constant extension")
    p.add_argument("--k", type=int, default=1,
                   help="bounded mode per subset (default 1)")

    p = add("skolemize", "replace strong quantifiers")
    p.add_argument("--formula", required=True)

    p = add("expand", "n-th expansion of the weak quantifiers")
    p.add_argument("--formula", required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("herbrand", "search for a valid expansion")
    p.add_argument("--formula", required=True)
    p.add_argument("--max-n", type=int, default=None)

    p = add("fo-interpolate", "first-order interpolation pipeline")
    p.add_argument("--formula", required=True)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--domain-cap", type=int, default=None)

    p = add("kripke", "build the up-set lattice of a frame", lattice=False)
    p.add_argument("--frame", required=True, help="frame file path")
    p.add_argument("--mode", choices=("godel", "heyting"), default="godel")
    p.add_argument("--out-lattice", help="also write the lattice file here")

    add("residuum", "derive the monoid operation or refute residuation")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    cfg.fmt = getattr(args, "format", "text")
    cfg.output = getattr(args, "output", None)
    cfg.lattice = getattr(args, "lattice", None)
    cfg.frame = getattr(args, "frame", None)
    cfg.out_lattice = getattr(args, "out_lattice", None)
    cfg.mode = getattr(args, "mode", "godel")
    cfg.seed = getattr(args, "seed", 2024)
    cfg.var_cap = (getattr(args, "var_cap", None)
                   if getattr(args, "var_cap", None) is not None
                   else _env_int("LATLOG_VAR_CAP", 10))
    cfg.level_cap = (getattr(args, "level_cap", None)
                     if getattr(args, "level_cap", None) is not None
                     else _env_int("LATLOG_LEVEL_CAP", None))
    cfg.max_n = (getattr(args, "max_n", None)
                 if getattr(args, "max_n", None) is not None
                 else _env_int("LATLOG_MAX_N", 8))
    cfg.domain_cap = (getattr(args, "domain_cap", None)
                      if getattr(args, "domain_cap", None) is not None
                      else _env_int("LATLOG_DOMAIN_CAP", 2))
    cfg.k = getattr(args, "k", None)
    cfg.n = getattr(args, "n", 1)
    if getattr(args, "formula", None) is not None:
        cfg.formulas.append(args.formula)
    if getattr(args, "antecedent", None) is not None:
        cfg.formulas = [args.antecedent, args.succedent]
    if getattr(args, "vars", None):
        cfg.variables = [v.strip() for v in args.vars.split(",") if v.strip()]
    if getattr(args, "connectives", None):
        cfg.connectives = [c.strip() for c in args.connectives.split(",") if c.strip()]
    if getattr(args, "assign", None):
        for part in args.assign.split(","):
            if "=" not in part:
                raise LatlogError(f"bad assignment entry {part!r}")
            k, v = part.split("=", 1)
            cfg.assignment[k.strip()] = v.strip()
    for value in (cfg.var_cap, cfg.max_n, cfg.domain_cap):
        if value is not None and value <= 0:
            raise LatlogError("budgets must be positive")
    return cfg


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        code, report = HANDLERS[config.command](config)
        if report is not None:
            emit(report, config)
        return code
    except NotValidError as exc:
        emit({"status": "NOT_VALID", "code": exc.code, "message": exc.message,
              "details": _plain(exc.details)},
             RunConfig(command=args.command, fmt=getattr(args, "format", "text"),
                       output=getattr(args, "output", None)))
        return EXIT_INPUT
    except BudgetExceeded as exc:
        emit({"status": "UNKNOWN", "code": exc.code, "message": exc.message,
              "details": _plain(exc.details)},
             RunConfig(command=args.command, fmt=getattr(args, "format", "text"),
                       output=getattr(args, "output", None)))
        return EXIT_UNKNOWN
    except LatlogError as exc:
        emit({"status": "error", "code": exc.code, "message": exc.message,
              "details": _plain(exc.details)},
             RunConfig(command=args.command, fmt=getattr(args, "format", "text"),
                       output=getattr(args, "output", None)))
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
