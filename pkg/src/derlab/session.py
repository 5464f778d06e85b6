"""Loader for ``.der`` session files.

A session file is line oriented; ``#`` starts a comment::

    ring poly 3
    der d1 = dx1
    der d3 = (x3^2)*dx1 + x3*dx2 + 2*dx3
    family D : d1, d3

The ring line must come first and appear exactly once. Derivation and
family names share one namespace.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .derivation import Derivation, DerivationFamily
from .errors import DerlabError, ParseError
from .parsing import parse_derivation_coeffs
from .poly import RingSpec

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_RING = re.compile(r"\s*ring\s+(poly|series)\s+(\d+)(?:\s+trunc\s+(\d+))?\s*\Z")
_DER = re.compile(rf"\s*der\s+({_NAME})\s*=")
_FAMILY = re.compile(rf"\s*family\s+({_NAME})\s*:")


class SessionError(DerlabError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        text = message
        if line is not None:
            text += f", line {line}"
            if column is not None:
                text += f", column {column}"
        super().__init__(text)


@dataclass
class Session:
    ring: RingSpec
    derivations: dict[str, Derivation] = field(default_factory=dict)
    families: dict[str, DerivationFamily] = field(default_factory=dict)

    def family(self, name: str) -> DerivationFamily:
        try:
            return self.families[name]
        except KeyError:
            raise SessionError(f"unknown family {name!r}") from None

    def derivation(self, name: str) -> Derivation:
        try:
            return self.derivations[name]
        except KeyError:
            raise SessionError(f"unknown derivation {name!r}") from None

    def render(self) -> list[str]:
        lines = [f"ring {self.ring}"]
        lines += [f"der {k} = {d}" for k, d in self.derivations.items()]
        lines += [f"family {k} : {', '.join(f.names)}" for k, f in self.families.items()]
        return lines


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _parse_ring(line: str, lineno: int) -> RingSpec:
    m = _RING.match(line)
    if m is None:
        raise SessionError("malformed ring declaration (expected: ring poly|series N [trunc M])", lineno, 1)
    mode, n, trunc = m.groups()
    n = int(n)
    if n < 1:
        raise SessionError("ring needs at least one variable", lineno, m.start(2) + 1)
    if mode == "series":
        if trunc is None:
            raise SessionError("series ring needs 'trunc N'", lineno, 1)
        if int(trunc) < 1:
            raise SessionError("truncation order must be positive", lineno, m.start(3) + 1)
        return RingSpec.series(n, int(trunc))
    if trunc is not None:
        raise SessionError("'trunc' only applies to series rings", lineno, m.start(3) + 1)
    return RingSpec.polynomial(n)


def parse_session(text: str) -> Session:
    session: Session | None = None
    taken: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        keyword = line.split()[0]
        if keyword == "ring":
            if session is not None:
                raise SessionError("duplicate ring declaration", lineno, 1)
            session = Session(_parse_ring(line, lineno))
            continue
        if keyword not in ("der", "family"):
            raise SessionError(f"unknown declaration {keyword!r}", lineno, line.index(keyword) + 1)
        if session is None:
            raise SessionError("the ring declaration must come first", lineno, 1)

        if keyword == "der":
            m = _DER.match(line)
            if m is None:
                raise SessionError("malformed derivation (expected: der NAME = expression)", lineno, 1)
            name = m.group(1)
            if name in taken:
                raise SessionError(f"duplicate name {name!r}", lineno, m.start(1) + 1)
            body = line[m.end():]
            try:
                coeffs = parse_derivation_coeffs(body, session.ring)
            except ParseError as e:
                col = m.end() + (e.pos or 0) + 1
                raise SessionError(e.message, lineno, col) from None
            session.derivations[name] = Derivation(session.ring, coeffs)
            taken.add(name)
        else:
            m = _FAMILY.match(line)
            if m is None:
                raise SessionError("malformed family (expected: family NAME : NAME, ...)", lineno, 1)
            name = m.group(1)
            if name in taken:
                raise SessionError(f"duplicate name {name!r}", lineno, m.start(1) + 1)
            members = []
            offset = m.end()
            for part in line[m.end():].split(","):
                ref = part.strip()
                col = offset + (part.index(ref) if ref else 0) + 1
                offset += len(part) + 1
                if not re.fullmatch(_NAME, ref):
                    raise SessionError("expected a derivation name", lineno, col)
                if ref not in session.derivations:
                    raise SessionError(f"unknown name {ref!r}", lineno, col)
                if ref in members:
                    raise SessionError(f"duplicate member {ref!r} in family", lineno, col)
                members.append(ref)
            session.families[name] = DerivationFamily(
                session.ring, tuple(members), tuple(session.derivations[r] for r in members)
            )
            taken.add(name)
    if session is None:
        raise SessionError("missing ring declaration")
    return session


def load_session(path) -> Session:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SessionError(f"cannot read {path}: {e.strerror}") from None
    return parse_session(text)
