"""Atom syntax and team files.

Atoms are written ``qinc(x1,x2; y1,y2; 2)`` or ``rinc(x; y; 1/4)``.  The
keyword decides the kind, so ``qinc(x; y; 1)`` and ``rinc(x; y; 1)`` differ.
Teams are CSV (header row of variable names) or JSON
(``{"variables": [...], "rows": [[...], ...]}``); every value is a string.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import re
from fractions import Fraction
from pathlib import Path
from typing import IO, List, Optional, Union

from .errors import (
    AtomSyntaxError,
    DuplicateHeader,
    EmptyHeader,
    RaggedRow,
    TeamFormatError,
)
from .model import RESERVED_CHARS, Atom, QuantityAtom, RatioAtom, Team, assumption_kind, check_variable

log = logging.getLogger(__name__)

PathOrStream = Union[str, os.PathLike, IO[str]]

_NAT = re.compile(r"\d+")
_FRAC = re.compile(r"(\d+)\s*/\s*(\d+)")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, token: str):
        self.skip()
        if not self.text.startswith(token, self.pos):
            raise AtomSyntaxError(self.text, self.pos, repr(token))
        self.pos += len(token)

    def name(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch.isspace() or ch in RESERVED_CHARS:
                break
            self.pos += 1
        if start == self.pos:
            raise AtomSyntaxError(self.text, start, "a variable name")
        return self.text[start:self.pos]

    def varlist(self) -> tuple:
        names = [self.name()]
        while True:
            self.skip()
            if self.text.startswith(",", self.pos):
                self.pos += 1
                names.append(self.name())
            else:
                return tuple(names)

    def match(self, pattern):
        self.skip()
        m = pattern.match(self.text, self.pos)
        if m:
            self.pos = m.end()
        return m

    def end(self):
        self.skip()
        if self.pos != len(self.text):
            raise AtomSyntaxError(self.text, self.pos, "end of input")


def parse_atom(text: str) -> Atom:
    """Parse one atom; raises :class:`AtomSyntaxError` or a validation error."""
    s = _Scanner(text)
    s.skip()
    if text.startswith("qinc", s.pos):
        kind = "q"
    elif text.startswith("rinc", s.pos):
        kind = "r"
    else:
        raise AtomSyntaxError(text, s.pos, "'qinc' or 'rinc'")
    s.pos += 4
    s.expect("(")
    lhs = s.varlist()
    s.expect(";")
    rhs = s.varlist()
    s.expect(";")
    if kind == "q":
        m = s.match(_NAT)
        if not m:
            raise AtomSyntaxError(text, s.pos, "a natural number bound")
        bound = int(m.group())
    else:
        m = s.match(_FRAC)
        if m:
            if int(m.group(2)) == 0:
                raise AtomSyntaxError(text, m.start(2), "a non-zero denominator")
            bound = Fraction(int(m.group(1)), int(m.group(2)))
        else:
            m = s.match(_NAT)
            if not m:
                raise AtomSyntaxError(text, s.pos, "a fraction a/b or 0 or 1")
            bound = Fraction(int(m.group()))
    s.expect(")")
    s.end()
    if kind == "q":
        return QuantityAtom(lhs, rhs, bound)
    return RatioAtom(lhs, rhs, bound)


def format_atom(atom: Atom) -> str:
    return str(atom)


def parse_assumptions(text: str) -> List[Atom]:
    """One atom per line; ``#`` starts a comment.  Kinds may not be mixed."""
    atoms = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            atoms.append(parse_atom(line))
    assumption_kind(atoms)
    return atoms


def _read_text(source: PathOrStream) -> str:
    if hasattr(source, "read"):
        return source.read()
    return Path(source).read_text(encoding="utf-8")


def read_assumptions(source: PathOrStream) -> List[Atom]:
    return parse_assumptions(_read_text(source))


def _guess_format(source, fmt):
    if fmt:
        return fmt
    name = getattr(source, "name", source)
    if isinstance(name, (str, os.PathLike)) and str(name).lower().endswith(".json"):
        return "json"
    return "csv"


def _check_header(header):
    if not header or any(h == "" for h in header):
        raise EmptyHeader("team files need a header row of non-empty variable names")
    seen = set()
    for h in header:
        if h in seen:
            raise DuplicateHeader(f"variable {h!r} appears twice in the header")
        seen.add(h)
        check_variable(h)


def _team_from(header, rows) -> Team:
    header = [h.strip() for h in header]
    _check_header(header)
    for lineno, row in rows:
        if len(row) != len(header):
            raise RaggedRow(f"row {lineno} has {len(row)} fields, header has {len(header)}")
    team = Team(header, [row for _, row in rows])
    if team.duplicates_dropped:
        log.warning("dropped %d duplicate row(s); a team is a set", team.duplicates_dropped)
    return team


def parse_team_csv(text: str) -> Team:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyHeader("empty team file") from None
    rows = [(reader.line_num, row) for row in reader if row]
    return _team_from(header, rows)


def parse_team_json(text: str) -> Team:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TeamFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict) or "variables" not in data or "rows" not in data:
        raise TeamFormatError('a JSON team needs "variables" and "rows"')
    header, rows = data["variables"], data["rows"]
    if not isinstance(header, list) or not all(isinstance(h, str) for h in header):
        raise TeamFormatError('"variables" must be an array of strings')
    checked = []
    for k, row in enumerate(rows):
        if not isinstance(row, list) or not all(isinstance(v, str) for v in row):
            raise TeamFormatError(f"row {k} must be an array of strings")
        checked.append((k, row))
    return _team_from(header, checked)


def read_team(source: PathOrStream, format: Optional[str] = None) -> Team:
    fmt = _guess_format(source, format)
    text = _read_text(source)
    if fmt == "json":
        return parse_team_json(text)
    if fmt == "csv":
        return parse_team_csv(text)
    raise ValueError(f"unknown team format {fmt!r}")


def team_to_csv(team: Team) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(team.variables)
    writer.writerows(team.sorted_rows())
    return buf.getvalue()


def team_to_dict(team: Team) -> dict:
    return {"variables": list(team.variables), "rows": [list(r) for r in team.sorted_rows()]}


def team_to_json(team: Team) -> str:
    return json.dumps(team_to_dict(team))


def write_team(team: Team, target: PathOrStream, format: Optional[str] = None) -> None:
    fmt = _guess_format(target, format)
    text = team_to_json(team) if fmt == "json" else team_to_csv(team)
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")
