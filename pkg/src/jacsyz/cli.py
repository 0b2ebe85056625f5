"""Command-line front end.

Exit codes: 0 success or match, 1 verified mismatch, 2 hypothesis failure,
64 usage or input errors.  Diagnostics go to stderr prefixed ``error:``.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import List, Optional, TextIO

from .groebner import DegreeCapError, ModuleOrder
from .jacobian import Hypersurface, d0, milnor_resolution
from .ring import (
    GREVLEX,
    LEX,
    CharacteristicError,
    Field,
    NonHomogeneousError,
    Polynomial,
    PolyParseError,
    RingSpec,
    field_from_string,
    max_variable_index,
)
from .toric import (
    BUILTIN_NAMES,
    Builtin,
    DependentHyperplanesError,
    GenericityNotFound,
    ToricModel,
    VerificationReport,
    builtin,
    check_normal_crossing,
    check_regular_sequence,
    predict_nc_arrangement,
    predict_smooth,
    predict_toric,
    random_generic,
    verify_builtin,
    verify_corollary1,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_HYPOTHESIS = 2
EXIT_USAGE = 64

COMMANDS = ("predict", "resolve", "d0", "check-nc", "check-regseq", "verify-toric", "verify-cor1")
TORIC_COMMANDS = ("check-nc", "check-regseq", "verify-toric", "verify-cor1")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class JobSpec:
    command: str
    n: Optional[int] = None
    e: Optional[int] = None
    d: Optional[int] = None
    field: str = "q"
    order: str = "grevlex"
    seed: Optional[int] = None
    bound: int = 10
    max_degree: Optional[int] = None
    json: bool = False
    force: bool = False
    builtin: Optional[str] = None
    input: Optional[str] = None
    expr: Optional[str] = None
    mode: str = "toric"

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "JobSpec":
        spec = cls(command=ns.command)
        for k in cls.__dataclass_fields__:
            if k != "command" and hasattr(ns, k):
                setattr(spec, k, getattr(ns, k))
        return spec


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-n", type=int, help="projective dimension (nvars = n + 1)")
    common.add_argument("-e", type=int, help="degree of g")
    common.add_argument("-d", type=int, help="degree of f")
    common.add_argument("--field", default="q", help="q (default), fp or fp:<prime>")
    common.add_argument("--order", default="grevlex", choices=["grevlex", "lex"])
    common.add_argument("--seed", type=int, help="draw a random generic model with this seed")
    common.add_argument("--bound", type=int, default=10, help="coefficient bound for random models")
    common.add_argument("--max-degree", dest="max_degree", type=int, help="Gröbner/twist degree cap")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--force", action="store_true", help="compute even when hypotheses cannot hold")
    src = common.add_mutually_exclusive_group()
    src.add_argument("--builtin", choices=BUILTIN_NAMES)
    src.add_argument("--input", help="file: 'ring <nvars>' then one polynomial")
    src.add_argument("--expr", help="inline polynomial (g for toric commands, f otherwise)")

    parser = _Parser(prog="jacsyz", description="Jacobian syzygies and Milnor algebra resolutions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("predict", parents=[common], help="predicted Betti table")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--toric", dest="mode", action="store_const", const="toric", help="uses -n, -e (default)")
    mode.add_argument("--smooth", dest="mode", action="store_const", const="smooth", help="uses -n, -d")
    mode.add_argument("--arrangement", dest="mode", action="store_const", const="arrangement", help="uses -n, -d")
    p.set_defaults(mode="toric")
    helps = {
        "resolve": "minimal resolution of M(f)",
        "d0": "minimal generators and exponents of D_0(f)",
        "check-nc": "normal crossing test for a toric model",
        "check-regseq": "regular sequence test for g'_0..g'_n",
        "verify-toric": "compare the computed table with the toric prediction",
        "verify-cor1": "check that the rho'_ij minimally generate D_0(f)",
    }
    for name in COMMANDS[1:]:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


# --------------------------------------------------------------------------
# inputs


def _field(job: JobSpec) -> Field:
    try:
        return field_from_string(job.field)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _module_order(job: JobSpec) -> ModuleOrder:
    return ModuleOrder(LEX if job.order == "lex" else GREVLEX, "top")


def _read_source(job: JobSpec) -> tuple[Optional[int], str]:
    """(nvars or None, expression text) for --input / --expr."""
    if job.expr is not None:
        nv = job.n + 1 if job.n is not None else None
        return nv, job.expr
    try:
        with open(job.input, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh]
    except OSError as exc:
        raise UsageError(f"cannot read {job.input}: {exc.strerror}") from None
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("ring"):
        raise UsageError(f"{job.input}: first line must be 'ring <nvars>'")
    head = lines[0].split()
    if len(head) != 2 or not head[1].isdigit():
        raise UsageError(f"{job.input}: malformed header {lines[0]!r}")
    if len(lines) < 2:
        raise UsageError(f"{job.input}: missing polynomial")
    return int(head[1]), " ".join(lines[1:])


def _parse_input(job: JobSpec, fld: Field) -> Polynomial:
    nv, text = _read_source(job)
    if nv is None:
        nv = max(3, max_variable_index(text) + 1)
    try:
        ring = RingSpec(nv, fld)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return ring.parse(text)


def _builtin(job: JobSpec, fld: Field) -> Builtin:
    return builtin(job.builtin, job.n if job.n is not None else 2, job.e if job.e is not None else 2, fld)


def _random_model(job: JobSpec, fld: Field) -> ToricModel:
    if job.n is None or job.e is None:
        raise UsageError("--seed needs -n and -e")
    model, _ = random_generic(job.n, job.e, job.seed, job.bound, fld=fld)
    return model


def _has_source(job: JobSpec) -> bool:
    return job.builtin is not None or job.input is not None or job.expr is not None


def resolve_polynomial(job: JobSpec) -> Polynomial:
    """f for resolve / d0."""
    fld = _field(job)
    if job.builtin is not None:
        return _builtin(job, fld).f
    if job.input is not None or job.expr is not None:
        return _parse_input(job, fld)
    if job.seed is not None:
        return _random_model(job, fld).f
    raise UsageError("need one of --builtin, --input, --expr or --seed")


def resolve_fixture(job: JobSpec) -> Builtin:
    """The toric input (g and hyperplanes) for the toric commands."""
    fld = _field(job)
    if job.builtin is not None:
        return _builtin(job, fld)
    if job.input is not None or job.expr is not None:
        return Builtin("input", _parse_input(job, fld))
    if job.seed is not None:
        return Builtin(f"random(seed={job.seed})", _random_model(job, fld).g)
    raise UsageError("need one of --builtin, --input, --expr or --seed")


# --------------------------------------------------------------------------
# commands


def _yn(b) -> str:
    return "yes" if b else "no"


def _edges(edges) -> str:
    return " ".join("{" + ",".join(map(str, I)) + "}" for I in edges) or "none"


def _emit(out: TextIO, job: JobSpec, data: dict, text: str):
    if job.json:
        out.write(json.dumps(data) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def cmd_predict(job: JobSpec, out: TextIO) -> int:
    if job.n is None:
        raise UsageError("predict needs -n")
    try:
        if job.mode == "toric":
            if job.e is None:
                raise UsageError("predict --toric needs -e")
            if job.n < 2 or job.e < 1:
                raise UsageError("predict --toric needs n >= 2 and e >= 1")
            pred = predict_toric(job.n, job.e)
        else:
            if job.d is None:
                raise UsageError(f"predict --{job.mode} needs -d")
            pred = (predict_smooth if job.mode == "smooth" else predict_nc_arrangement)(job.n, job.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = pred.table.text() + "\nexponents: " + " ".join(map(str, pred.exponents))
    _emit(out, job, pred.to_dict(), text)
    return EXIT_OK


def cmd_resolve(job: JobSpec, out: TextIO) -> int:
    h = Hypersurface(resolve_polynomial(job))
    res, table = milnor_resolution(h, _module_order(job), job.max_degree)
    _emit(out, job, table.to_dict(), table.text())
    return EXIT_OK


def cmd_d0(job: JobSpec, out: TextIO) -> int:
    h = Hypersurface(resolve_polynomial(job))
    rep = d0(h, _module_order(job).base, job.max_degree)
    lines = [f"m: {rep.m}", "exponents: " + " ".join(map(str, rep.exponents))]
    for k, g in enumerate(rep.generators):
        lines.append(f"[{k}] (" + ", ".join(str(c) for c in g.components) + ")")
    _emit(out, job, rep.to_dict(), "\n".join(lines))
    return EXIT_OK


def _toric_model(job: JobSpec) -> ToricModel:
    fx = resolve_fixture(job)
    try:
        return fx.model()
    except DependentHyperplanesError:
        raise _HypothesisFailure("hyperplanes are linearly dependent; V is not a toric model") from None


class _HypothesisFailure(Exception):
    pass


def cmd_check_nc(job: JobSpec, out: TextIO) -> int:
    ok, failing = check_normal_crossing(_toric_model(job))
    data = {"normal_crossing": ok, "failing_edges": [list(I) for I in failing]}
    _emit(out, job, data, f"normal_crossing: {_yn(ok)}\nfailing edges: {_edges(failing)}")
    return EXIT_OK if ok else EXIT_HYPOTHESIS


def cmd_check_regseq(job: JobSpec, out: TextIO) -> int:
    ok = check_regular_sequence(_toric_model(job))
    _emit(out, job, {"regular_sequence": ok}, f"regular_sequence: {_yn(ok)}")
    return EXIT_OK if ok else EXIT_HYPOTHESIS


def _report_text(rep: VerificationReport) -> str:
    h = rep.hypotheses
    lines = [
        f"independent_hyperplanes: {_yn(h.get('independent_hyperplanes', True))}",
        f"normal_crossing: {_yn(h['normal_crossing'])}",
        f"regular_sequence: {_yn(h['regular_sequence'])}",
        f"failing edges: {_edges(h['failing_edges'])}",
    ]
    if rep.computed is not None:
        lines += ["computed:", rep.computed.text()]
    lines += ["predicted:", rep.predicted.text()]
    lines.append("exponents: " + (" ".join(map(str, rep.exponents)) or "-"))
    if rep.checks is not None:
        lines += [f"{k}: {_yn(v)}" for k, v in rep.checks.items()]
    lines.append(f"match: {_yn(rep.match)}")
    return "\n".join(lines)


def _verdict(rep: VerificationReport) -> int:
    if not rep.hypotheses_hold:
        return EXIT_HYPOTHESIS
    return EXIT_OK if rep.match else EXIT_MISMATCH


def cmd_verify_toric(job: JobSpec, out: TextIO) -> int:
    rep = verify_builtin(resolve_fixture(job), job.force, _module_order(job), job.max_degree)
    _emit(out, job, rep.to_dict(), _report_text(rep))
    return _verdict(rep)


def cmd_verify_cor1(job: JobSpec, out: TextIO) -> int:
    rep = verify_corollary1(_toric_model(job), _module_order(job).base, job.max_degree)
    _emit(out, job, rep.to_dict(), _report_text(rep))
    return _verdict(rep)


HANDLERS = {
    "predict": cmd_predict,
    "resolve": cmd_resolve,
    "d0": cmd_d0,
    "check-nc": cmd_check_nc,
    "check-regseq": cmd_check_regseq,
    "verify-toric": cmd_verify_toric,
    "verify-cor1": cmd_verify_cor1,
}


def run(job: JobSpec, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    try:
        return HANDLERS[job.command](job, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except PolyParseError as exc:
        err.write(f"error: parse: {exc}\n")
        return EXIT_USAGE
    except DegreeCapError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (_HypothesisFailure, GenericityNotFound) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_HYPOTHESIS
    except (NonHomogeneousError, CharacteristicError, ValueError, IndexError, KeyError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main(argv: Optional[List[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    return run(JobSpec.from_args(ns), out, err)


if __name__ == "__main__":
    raise SystemExit(main())
