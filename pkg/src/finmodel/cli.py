"""Command-line interface: ``finmodel <command> --input FILE``.

Exit codes: 0 success, 1 invalid input, 2 a mathematical check failed,
3 an internal invariant was breached.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Sequence

from . import ainf, generation, yoneda
from .complexes import DGModule
from .exactlin import ValidationError, field_from_tag

EXIT_OK, EXIT_INPUT, EXIT_MATH, EXIT_INTERNAL = 0, 1, 2, 3


class MathViolation(Exception):
    """A computed property failed (as opposed to malformed input)."""


@dataclass
class Report:
    command: str
    status: str = "ok"
    payload: dict = dc_field(default_factory=dict)
    diagnostics: list[str] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {"command": self.command, "status": self.status, "payload": self.payload,
                "diagnostics": self.diagnostics}

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(d["command"], d["status"], d["payload"], list(d["diagnostics"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.status}"]
        for key, value in self.payload.items():
            if isinstance(value, (dict, list)):
                value = json.dumps(value, sort_keys=True)
            lines.append(f"  {key}: {value}")
        lines.extend(f"  ! {d}" for d in self.diagnostics)
        return "\n".join(lines)


# -- input -------------------------------------------------------------------


def parse(source: str | Path, field: str | None = None, dg: bool = False) -> ainf.AInfinityAlgebra:
    """Read an algebra description from a file path (JSON text)."""
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {source}: {exc.strerror}") from None
    return parse_text(text, field, dg)


def parse_text(text: str, field: str | None = None, dg: bool = False) -> ainf.AInfinityAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    F = field_from_tag(field) if field is not None else None
    if F is not None and isinstance(data, dict):
        data = dict(data, field=F.tag())
    return ainf.algebra_from_dict(data, F, dg=dg)


def serialize(A: ainf.AInfinityAlgebra) -> str:
    """Canonical text, one basis element or operation entry per line.

    Parsing the output and serializing again reproduces it byte for byte.
    """
    d = ainf.algebra_to_dict(A)
    dump = json.dumps
    lines = ["{", f'  "field": {dump(d["field"])},']
    if "unit" in d:
        lines.append(f'  "unit": {dump(d["unit"])},')
    lines.append('  "basis": [')
    lines.append(",\n".join(f"    {dump(b)}" for b in d["basis"]))
    lines.append("  ],")
    if not d["ops"]:
        lines.append('  "ops": {}')
    else:
        lines.append('  "ops": {')
        blocks = []
        for k, entries in d["ops"].items():
            body = ",\n".join(f"      {dump(e)}" for e in entries)
            blocks.append(f'    {dump(k)}: [\n{body}\n    ]')
        lines.append(",\n".join(blocks))
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dims(d: dict) -> dict:
    return {str(n): v for n, v in sorted(d.items()) if v}


def _minimal(A: ainf.AInfinityAlgebra, max_arity=None) -> tuple[ainf.AInfinityAlgebra, list[str]]:
    if A.is_minimal:
        return A, []
    mm = ainf.minimal_model(A, max_arity)
    return mm.algebra, ["input has m_1 ≠ 0: replaced by its minimal model"]


# -- commands ----------------------------------------------------------------


def cmd_info(args, A) -> Report:
    p = ainf.predicates(A)
    return Report("info", payload={
        "field": A.field.tag(),
        "dims": _dims(A.dims()),
        "arities": sorted(A.ops),
        "minimal": p.is_minimal,
        "connective": p.is_connective,
        "proper": p.is_proper,
        "locally_finite": p.is_locally_finite,
        "interval": list(p.interval) if p.interval else None,
        "cohomology_dims": _dims(p.cohomology_dims),
    })


def cmd_validate(args, A) -> Report:
    rep = ainf.validate(A, args.max_arity)
    r = Report("validate", payload={"checked_up_to": rep.checked_up_to, "holds": rep.ok})
    if not rep.ok:
        r.status = "violated"
        r.payload["arity"] = rep.arity
        r.payload["witness"] = list(rep.witness)
        r.diagnostics.append(rep.describe())
    return r


def cmd_minimal_model(args, A) -> Report:
    mm = ainf.minimal_model(A, args.max_arity)
    M = mm.algebra
    rep = ainf.validate(M, None if args.max_arity is None else args.max_arity + 1)
    r = Report("minimal-model", payload={
        "dims": _dims(M.dims()),
        "arities": sorted(M.ops),
        "algebra": ainf.algebra_to_dict(M),
        "representatives": {M.names[i]: {mm.source.names[j]: M.field.format(c) for j, c in sorted(v.items())}
                            for i, v in enumerate(mm.iota)},
    })
    if not rep.ok:
        raise MathViolation(f"transferred structure fails validation: {rep.describe()}")
    return r


def cmd_finite_model(args, A) -> Report:
    M, notes = _minimal(A, args.max_arity)
    fm = yoneda.finite_model(M)
    B = fm.algebra
    return Report("finite-model", payload={
        "window": fm.provenance["window"],
        "dims": _dims(B.dims()),
        "cohomology_dims": _dims(B.complex().cohomology_dims()),
        "algebra": ainf.algebra_to_dict(B),
    }, diagnostics=notes)


def cmd_verify_model(args, A) -> Report:
    M, notes = _minimal(A, args.max_arity)
    fm = yoneda.finite_model(M)
    rep = yoneda.verify_model(M, fm)
    r = Report("verify-model", payload={
        "dims_match": rep.dims_match, "cocycles": rep.cocycles,
        "basis_of_cohomology": rep.basis_of_cohomology, "products": rep.products,
        "model_cohomology_dims": _dims(rep.b_dims), "algebra_dims": _dims(rep.a_dims),
    }, diagnostics=notes)
    if not rep.ok:
        raise MathViolation(rep.describe())
    return r


def cmd_generation_bound(args, A) -> Report:
    b = generation.generation_bound(A)
    return Report("generation-bound", payload={"N": b.N, "N_prime": b.N_prime, "N_double_prime": b.N_double_prime})


def cmd_certify(args, A) -> Report:
    B = ainf.DGAlgebra.from_algebra(A)
    if args.module:
        try:
            mod = json.loads(Path(args.module).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read module {args.module}: {exc}") from None
        M = generation.module_from_dict(B, mod)
    else:
        M = DGModule.regular(B)
    cert = generation.cone_certificate(M)
    rep = generation.verify_certificate(cert)
    if args.output:
        Path(args.output).write_text(cert.to_json() + "\n", encoding="utf-8")
    r = Report("certify", payload={"length": cert.length, "bound": list(cert.bound),
                                   "window": list(cert.window), "verified": rep.ok,
                                   "third_terms": [s["third"] for s in cert.steps]})
    if not args.output:
        r.payload["certificate"] = cert.to_dict()
    if not rep.ok:
        raise MathViolation(rep.describe())
    return r


def cmd_verify_cert(args, _A) -> Report:
    try:
        data = json.loads(Path(args.input).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValidationError(f"cannot read {args.input}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    rep = generation.verify_certificate(data)
    r = Report("verify-cert", payload={"verified": rep.ok, "length": rep.length,
                                       "within_algebra_bound": rep.within_algebra_bound})
    if not rep.ok:
        if rep.failure and rep.failure.startswith("malformed"):
            raise ValidationError(rep.failure)
        r.status = "rejected"
        r.diagnostics.append(rep.describe())
    return r


def cmd_end_window(args, A) -> Report:
    if A is None:
        if args.a is None or args.b is None or args.m is None:
            raise ValidationError("end-window needs --a, --b and --m, or --input with --window")
        lo, hi = yoneda.end_degree_interval(args.a, args.b, args.m)
        return Report("end-window", payload={"a": args.a, "b": args.b, "m": args.m, "interval": [lo, hi]})
    M, notes = _minimal(A, args.max_arity)
    iv = M.interval() or (0, 0)
    lo, hi = args.window if args.window else (iv[0], 1)
    W = yoneda.EndomorphismWindow(M, lo, hi)
    return Report("end-window", payload={
        "window": [lo, hi],
        "dims": {str(n): d for n, d in W.dims.items()},
        "arities": {str(n): list(yoneda.contributing_arities(W.a, n)) for n in range(lo, hi + 1)},
        "cohomology_dims": {str(n): d for n, d in W.interior_cohomology_dims().items()},
    }, diagnostics=notes)


COMMANDS = {
    "info": cmd_info,
    "validate": cmd_validate,
    "minimal-model": cmd_minimal_model,
    "finite-model": cmd_finite_model,
    "verify-model": cmd_verify_model,
    "generation-bound": cmd_generation_bound,
    "certify": cmd_certify,
    "verify-cert": cmd_verify_cert,
    "end-window": cmd_end_window,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finmodel", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--input", help="algebra description (JSON); a certificate for verify-cert")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--field", help="reinterpret coefficients over this field (Q or a prime)")
    parser.add_argument("--max-arity", type=int, default=None)
    parser.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
    parser.add_argument("--module", help="module description for certify (default: the regular module)")
    parser.add_argument("--output", help="write the certificate to this file")
    parser.add_argument("--a", type=int)
    parser.add_argument("--b", type=int)
    parser.add_argument("--m", type=int)
    return parser


def dispatch(command: str, args: argparse.Namespace) -> tuple[Report, int]:
    try:
        needs_input = command != "end-window"
        if needs_input and not args.input:
            raise ValidationError("--input is required")
        A = parse(args.input, args.field) if args.input and command != "verify-cert" else None
        report = COMMANDS[command](args, A)
        code = EXIT_OK if report.status == "ok" else EXIT_MATH
    except ValidationError as exc:
        report, code = Report(command, "input-error", diagnostics=[str(exc)]), EXIT_INPUT
    except MathViolation as exc:
        report, code = Report(command, "violated", diagnostics=[str(exc)]), EXIT_MATH
    except Exception as exc:  # noqa: BLE001 - reported as an internal breach
        report, code = Report(command, "internal-error", diagnostics=[f"{type(exc).__name__}: {exc}"]), EXIT_INTERNAL
    return report, code


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    report, code = dispatch(args.command, args)
    out = report.to_json() if args.format == "json" else report.to_text()
    stream = sys.stdout if code == EXIT_OK or args.format == "json" else sys.stderr
    print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
