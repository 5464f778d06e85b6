"""Command line front end: ``derlab <command> <file> [options]``.

Exit codes: 0 affirmative verdict, 1 negative verdict (with a witness or
certificate in the report), 2 usage or precondition error, 3 internal
consistency failure (a bug).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import derivation as der
from . import structure as st
from .errors import DerlabError, InternalConsistencyError, PreconditionError
from .poly import Poly, format_scalar
from .session import Session, load_session

COMMANDS = (
    "parse", "bracket", "commutes", "divergence", "classify",
    "simple", "upgrade", "slice", "nilpotent", "basis",
)

AFFIRMATIVE = {
    "ok", "commuting", "special", "simple", "case_a", "case_b",
    "upgraded", "slice", "nilpotent", "basis",
}

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(DerlabError):
    pass


@dataclass
class Report:
    command: str
    verdict: str
    payload: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.verdict in AFFIRMATIVE else EXIT_NEGATIVE

    def as_json(self) -> dict:
        return {"command": self.command, "verdict": self.verdict, **self.payload}


# -- rendering ---------------------------------------------------------------------


def _nil_text(v: dict) -> str:
    if v["verdict"] == "nilpotent":
        return f"nilpotent, order {v['order']}"
    if v["verdict"] == "not_nilpotent":
        return f"not_nilpotent, d^{v['k']} = {v['c']}*d^{v['m']}"
    return f"unknown within budget {v['budget']}"


def _text_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return "[" + ", ".join(_text_value(v) for v in value) + "]"
    return str(value)


def _text_lines(key: str, value) -> list[str]:
    if key == "slice":
        return [f"{k} = {v}" for k, v in value.items()]
    if key == "session":
        return list(value)
    if isinstance(value, dict):
        if "verdict" in value:
            return [f"{key}: {_nil_text(value)}"]
        lines = []
        for k, v in value.items():
            lines += _text_lines(f"{key}[{k}]", v)
        return lines
    return [f"{key}: {_text_value(value)}"]


def emit_report(report: Report, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report.as_json(), ensure_ascii=False, separators=(",", ":")) + "\n"
    lines = [f"command: {report.command}", f"verdict: {report.verdict}"]
    for k, v in report.payload.items():
        lines += _text_lines(k, v)
    return "\n".join(lines) + "\n"


# -- command implementations ----------------------------------------------------------


def _polys(ps) -> list[str]:
    return [str(p) for p in ps]


def _generator_json(v) -> dict:
    if isinstance(v, der.Nilpotent):
        return {"verdict": "nilpotent", "order": v.order}
    if isinstance(v, der.NotNilpotent):
        return {"verdict": "not_nilpotent", "m": v.m, "k": v.k, "c": format_scalar(v.c)}
    return {"verdict": "unknown", "budget": v.budget}


def _nilpotency_json(rep: der.NilpotencyReport) -> dict:
    return {f"x{j}": _generator_json(v) for j, v in enumerate(rep.verdicts, start=1)}


def _nil_verdict(reports) -> str:
    if all(r.locally_nilpotent for r in reports):
        return "nilpotent"
    if any(r.refuted for r in reports):
        return "not_nilpotent"
    return "unknown"


class _Target:
    def __init__(self, session: Session, family: str | None, ders: list[str] | None):
        self.session = session
        self.family_name = family
        self.der_names = ders or []

    def derivations(self, count: int) -> list[der.Derivation]:
        if self.family_name is not None or len(self.der_names) != count:
            raise UsageError(f"this command needs --der with {count} name(s)")
        return [self.session.derivation(n) for n in self.der_names]

    def family(self) -> der.DerivationFamily:
        if self.family_name is not None:
            return self.session.family(self.family_name)
        if self.der_names:
            names = tuple(self.der_names)
            if len(set(names)) != len(names):
                raise UsageError("repeated --der names")
            ders = tuple(self.session.derivation(n) for n in names)
            return der.DerivationFamily(self.session.ring, names, ders)
        raise UsageError("this command needs --family NAME (or --der NAME...)")


def _cmd_parse(t: _Target, budget):
    s = t.session
    return "ok", {
        "ring": str(s.ring),
        "derivations": {k: str(d) for k, d in s.derivations.items()},
        "families": {k: list(f.names) for k, f in s.families.items()},
    }


def _cmd_bracket(t: _Target, budget):
    d1, d2 = t.derivations(2)
    return "ok", {"bracket": str(der.bracket(d1, d2))}


def _cmd_commutes(t: _Target, budget):
    if t.family_name is None and len(t.der_names) == 2:
        d1, d2 = t.derivations(2)
        b = der.bracket(d1, d2)
        return ("commuting" if b.is_zero() else "not_commuting"), {"bracket": str(b)}
    fam = t.family()
    bad = der.first_noncommuting_pair(fam)
    if bad is None:
        return "commuting", {}
    i, j, b = bad
    return "not_commuting", {"pair": [fam.names[i], fam.names[j]], "bracket": str(b)}


def _cmd_divergence(t: _Target, budget):
    (d,) = t.derivations(1)
    div = der.divergence(d)
    return ("special" if div.is_zero() else "not_special"), {"divergence": str(div)}


def _cmd_simple(t: _Target, budget):
    fam = t.family()
    cert = st.family_simplicity(fam)
    if not st.verify_certificate(fam, cert):
        raise InternalConsistencyError("certificate failed re-verification")
    if cert.simple:
        return "simple", {"bezout": _polys(cert.bezout)}
    return "not_simple", {"stable_ideal": str(cert.stable_generator)}


def _cmd_classify(t: _Target, budget):
    fam = t.family()
    cls = st.classify_family(fam)
    if isinstance(cls, st.NotLemmaForm):
        w = cls.witness
        return "not_lemma_form", {
            "member": cls.member,
            "coefficient": f"dx{w.coefficient}",
            "variable": f"x{w.variable}",
        }
    if isinstance(cls, st.NotCommuting):
        return "not_commuting", {"pair": list(cls.pair), "bracket": str(cls.bracket)}
    for i, d in enumerate(fam):
        if cls.reconstruct(i) != d:
            raise InternalConsistencyError("classification failed re-verification")
    if isinstance(cls, st.CaseA):
        return "case_a", {
            "case": "a",
            "h_table": {n: _polys(h) for n, h in zip(cls.names, cls.h_table)},
        }
    return "case_b", {
        "case": "b",
        "pivot": cls.names[cls.pivot],
        "v": _polys(cls.v),
        "lambda": {n: format_scalar(lam) for n, lam in zip(cls.names, cls.lambdas)},
        "c": {n: [format_scalar(x) for x in cs] for n, cs in zip(cls.names, cls.c)},
    }


def _cmd_upgrade(t: _Target, budget):
    fam = t.family()
    sub = st.simplicity_upgrade(fam)
    pivot = sub.members[-1]
    return "upgraded", {
        "subset": list(sub.names),
        "pivot": sub.names[-1],
        "beta": str(pivot.coeffs[-1]),
    }


def _cmd_slice(t: _Target, budget):
    (d,) = t.derivations(1)
    sc = st.slice_coordinates(d)
    return "slice", {
        "beta": format_scalar(sc.beta),
        "slice": {f"f{i}": str(f) for i, f in enumerate(sc.f, start=1)},
    }


def _cmd_nilpotent(t: _Target, budget):
    if t.family_name is None and len(t.der_names) == 1:
        (d,) = t.derivations(1)
        rep = der.is_locally_nilpotent(d, budget)
        return _nil_verdict([rep]), {"budget": rep.budget, "nilpotency": _nilpotency_json(rep)}
    rep = st.verify_nilpotent_basis(t.family(), budget)
    verdict = _nil_verdict(rep.nilpotency)
    if not (rep.basis.is_basis and rep.basis.pairwise_commuting):
        verdict = "not_basis"
    return verdict, {
        "subset": list(rep.subset.names),
        "determinant": str(rep.basis.det),
        "commuting": rep.basis.pairwise_commuting,
        "nilpotency": {n: _nilpotency_json(r) for n, r in zip(rep.subset.names, rep.nilpotency)},
    }


def _cmd_basis(t: _Target, budget):
    fam = t.family()
    bc = der.basis_check(fam)
    payload = {"determinant": str(bc.det), "commuting": bc.pairwise_commuting}
    if not bc.pairwise_commuting:
        i, j, b = der.first_noncommuting_pair(fam)
        payload["pair"] = [fam.names[i], fam.names[j]]
        payload["bracket"] = str(b)
    ok = bc.is_basis and bc.pairwise_commuting
    return ("basis" if ok else "not_basis"), payload


_DISPATCH = {
    "parse": _cmd_parse,
    "bracket": _cmd_bracket,
    "commutes": _cmd_commutes,
    "divergence": _cmd_divergence,
    "classify": _cmd_classify,
    "simple": _cmd_simple,
    "upgrade": _cmd_upgrade,
    "slice": _cmd_slice,
    "nilpotent": _cmd_nilpotent,
    "basis": _cmd_basis,
}


def command_echo(command: str, family=None, ders=None, budget=None) -> str:
    parts = [command]
    if family is not None:
        parts += ["--family", family]
    if ders:
        parts += ["--der", *ders]
    if budget is not None:
        parts += ["--budget", str(budget)]
    return " ".join(parts)


def run_command(session: Session, command: str, family=None, ders=None, budget=None) -> Report:
    if command not in _DISPATCH:
        raise UsageError(f"unknown command {command!r}")
    if budget is not None and budget < 1:
        raise PreconditionError("budget must be a positive integer")
    target = _Target(session, family, ders)
    verdict, payload = _DISPATCH[command](target, budget)
    return Report(command_echo(command, family, ders, budget), verdict, payload)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="derlab",
        description="Simplicity, classification and slices for commuting derivations.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", help="session file (.der)")
    target = p.add_mutually_exclusive_group()
    target.add_argument("--family", metavar="NAME")
    target.add_argument("--der", metavar="NAME", nargs="+")
    p.add_argument("--budget", type=int, default=None, help="iteration budget for nilpotency checks")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        session = load_session(args.file)
        report = run_command(session, args.command, args.family, args.der, args.budget)
    except InternalConsistencyError as e:
        print(f"derlab: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except DerlabError as e:
        print(f"derlab: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(emit_report(report, args.format))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
