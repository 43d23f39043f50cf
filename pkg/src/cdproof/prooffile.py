"""Text format for tabular proofs.

One step per line::

    [*] <id>. <formula> [= <dterm>]

A leading ``*`` marks a goal, a line without ``= <dterm>`` is an axiom.
Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

from .dterms import CompactProof, DTermParseError, ProofStructureError, Step, format_dterm, parse_dterm
from .terms import ParseError, parse_formula, print_formula

_LINE = re.compile(r"^\s*(\*)?\s*(\d+)\s*\.\s*([^=]+?)\s*(?:=\s*(\S.*?))?\s*$")


class ProofFileError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_proof(text: str) -> CompactProof:
    steps: list[Step] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE.match(line)
        if not m:
            raise ProofFileError(lineno, f"cannot read step {line!r}")
        star, idx, ftext, dtext = m.groups()
        try:
            formula = parse_formula(ftext)
            body = parse_dterm(dtext) if dtext else None
        except (ParseError, DTermParseError) as exc:
            raise ProofFileError(lineno, str(exc)) from None
        steps.append(Step(int(idx), formula, body, bool(star)))
    if not steps:
        raise ProofFileError(0, "no steps")
    try:
        return CompactProof(steps)
    except ProofStructureError as exc:
        raise ProofFileError(0, str(exc)) from None


def load_proof(path: str | Path) -> CompactProof:
    return parse_proof(Path(path).read_text(encoding="utf-8"))


def format_proof(p: CompactProof, canonical: bool = True) -> str:
    lines = []
    for s in p.steps:
        star = "* " if s.goal else ""
        text = print_formula(s.formula, canonical=canonical) if s.formula is not None else "?"
        body = f" = {format_dterm(s.body)}" if s.body is not None else ""
        lines.append(f"{star}{s.index}. {text}{body}")
    return "\n".join(lines) + "\n"


def fixture_path(name: str) -> Path:
    """Path of a bundled proof file such as ``mer.cdp``."""
    return Path(str(resources.files("cdproof") / "fixtures" / name))


def load_fixture(name: str) -> CompactProof:
    return load_proof(fixture_path(name))
