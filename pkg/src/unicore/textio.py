"""Line-oriented text formats for instances, matches and block certificates.

Instance files::

    students 1 2 3
    school a capacity 1
    pref 1 : a b
    between a : { 2 } { 1 3 }
    within a : 2 3 1

Match files hold one ``match <student> : <school|->`` line per student.
Certificate files are match files plus ``coalition : <student>+`` and
``kind : between|within|efficient`` lines. ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .core import BlockCertificate, BlockKind, school_evidence
from .model import (
    UNMATCHED,
    Instance,
    InvalidInstance,
    Match,
    School,
    SchoolPriorities,
    validate_instance,
)

_TOKEN = re.compile(r"[{}:]|[^\s{}:]+")


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class MatchError(ValueError):
    """A match file that names unknown agents, repeats a student or overfills a school."""


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        tokens = _TOKEN.findall(body)
        if tokens:
            yield n, tokens


def _after_colon(n: int, tokens: list[str], head: int) -> list[str]:
    if len(tokens) <= head or tokens[head] != ":":
        raise ParseError(n, f"expected ':' after {' '.join(tokens[:head])!r}")
    return tokens[head + 1:]


def _groups(n: int, tokens: list[str]) -> list[list[str]]:
    groups: list[list[str]] = []
    current: list[str] | None = None
    for tok in tokens:
        if tok == "{":
            if current is not None:
                raise ParseError(n, "nested '{'")
            current = []
        elif tok == "}":
            if current is None:
                raise ParseError(n, "unmatched '}'")
            groups.append(current)
            current = None
        elif current is None:
            raise ParseError(n, f"student {tok!r} outside braces")
        else:
            current.append(tok)
    if current is not None:
        raise ParseError(n, "unclosed '{'")
    return groups


def parse_instance(text: str) -> Instance:
    """Parse and validate an instance; errors carry the offending line number."""
    students: list[str] | None = None
    schools: list[School] = []
    prefs: dict[str, tuple[str, ...]] = {}
    between: dict[str, tuple[frozenset[str], ...]] = {}
    within: dict[str, tuple[str, ...]] = {}
    where: dict[tuple[str, str | None], int] = {}

    for n, tokens in _lines(text):
        head = tokens[0]
        if head == "students":
            if students is not None:
                raise ParseError(n, "second 'students' line")
            students = tokens[1:]
            if not students:
                raise ParseError(n, "no students listed")
            where["students", None] = n
            for i in students:
                where.setdefault(("students", i), n)
        elif head == "school":
            if len(tokens) != 4 or tokens[2] != "capacity":
                raise ParseError(n, "expected 'school <id> capacity <int>'")
            try:
                q = int(tokens[3])
            except ValueError:
                raise ParseError(n, f"capacity {tokens[3]!r} is not an integer") from None
            schools.append(School(tokens[1], q))
            where.setdefault(("school", tokens[1]), n)
        elif head in ("pref", "between", "within"):
            if len(tokens) < 2:
                raise ParseError(n, f"'{head}' needs an owner")
            owner = tokens[1]
            rest = _after_colon(n, tokens, 2)
            table = {"pref": prefs, "between": between, "within": within}[head]
            if owner in table:
                raise ParseError(n, f"second '{head}' line for {owner!r}")
            if head == "pref":
                prefs[owner] = tuple(rest)
            elif head == "between":
                between[owner] = tuple(frozenset(g) for g in _groups(n, rest))
                where["between", owner] = n
            else:
                within[owner] = tuple(rest)
            where[head, owner] = n
        else:
            raise ParseError(n, f"unknown directive {head!r}")

    if students is None:
        raise ParseError(1, "missing 'students' line")
    for s in within:
        if s not in between:
            raise ParseError(where["within", s], f"'within' for {s!r} without a 'between' line")
    for s in between:
        if s not in within:
            raise ParseError(where["between", s], f"'between' for {s!r} without a 'within' line")

    raw = Instance(
        students=tuple(students),
        schools=tuple(schools),
        prefs=prefs,
        priorities={s: SchoolPriorities(s, between[s], within[s]) for s in between},
    )
    try:
        return validate_instance(raw)
    except InvalidInstance as exc:
        for err in exc.errors:
            if err.line is None:
                err.line = where.get((err.field, err.entity))
        raise InvalidInstance(exc.errors) from None


def serialize_instance(inst: Instance) -> str:
    out = ["students " + " ".join(inst.students)]
    out += [f"school {s.id} capacity {s.capacity}" for s in inst.schools]
    for i in inst.students:
        out.append(f"pref {i} :" + "".join(f" {s}" for s in inst.prefs[i]))
    for s in inst.school_ids:
        p = inst.priorities[s]
        # groups are printed in within order so the file reads top to bottom
        groups = " ".join(
            "{ " + " ".join(sorted(g, key=lambda i: inst.within_pos(s, i))) + " }"
            for g in p.between
        )
        out.append(f"between {s} : {groups}")
        out.append(f"within {s} : " + " ".join(p.within))
    return "\n".join(out) + "\n"


def _match_lines(inst: Instance, m: Match) -> list[str]:
    return [f"match {i} : {'-' if m[i] is UNMATCHED else m[i]}" for i in inst.students]


def serialize_match(inst: Instance, m: Match) -> str:
    return "\n".join(_match_lines(inst, m)) + "\n"


def _parse_match_lines(lines, inst: Instance) -> Match:
    schools = set(inst.school_ids)
    students = set(inst.students)
    assignment: dict = {}
    for n, tokens in lines:
        if len(tokens) != 4 or tokens[0] != "match" or tokens[2] != ":":
            raise ParseError(n, "expected 'match <student> : <school|->'")
        i, target = tokens[1], tokens[3]
        if i not in students:
            raise MatchError(f"line {n}: unknown student {i!r}")
        if i in assignment:
            raise MatchError(f"line {n}: student {i!r} assigned twice")
        if target != "-" and target not in schools:
            raise MatchError(f"line {n}: unknown school {target!r}")
        assignment[i] = UNMATCHED if target == "-" else target
    missing = [i for i in inst.students if i not in assignment]
    if missing:
        raise MatchError(f"students without an assignment: {missing}")
    m = Match({i: assignment[i] for i in inst.students})
    for s, k in m.occupancy().items():
        if k > inst.capacity[s]:
            raise MatchError(f"school {s!r} holds {k} students but has capacity {inst.capacity[s]}")
    return m


def parse_match(text: str, inst: Instance) -> Match:
    return _parse_match_lines(_lines(text), inst)


def serialize_certificate(inst: Instance, cert: BlockCertificate) -> str:
    members = [i for i in inst.students if i in cert.coalition]
    lines = _match_lines(inst, cert.alt_match)
    lines.append("coalition : " + " ".join(members))
    lines.append(f"kind : {cert.kind.value}")
    return "\n".join(lines) + "\n"


@dataclass
class _Extra:
    coalition: list[str] | None = None
    kind: str | None = None


def parse_certificate(text: str, inst: Instance, mu: Match | None = None) -> BlockCertificate:
    """Read a certificate; with ``mu`` given, its per-school evidence is recomputed."""
    extra = _Extra()
    match_lines = []
    for n, tokens in _lines(text):
        if tokens[0] == "coalition":
            extra.coalition = _after_colon(n, tokens, 1)
            unknown = [i for i in extra.coalition if i not in set(inst.students)]
            if unknown or not extra.coalition:
                raise MatchError(f"line {n}: bad coalition {extra.coalition}")
        elif tokens[0] == "kind":
            rest = _after_colon(n, tokens, 1)
            if len(rest) != 1 or rest[0] not in {k.value for k in BlockKind}:
                raise ParseError(n, "kind must be one of between, within, efficient")
            extra.kind = rest[0]
        else:
            match_lines.append((n, tokens))
    if extra.coalition is None or extra.kind is None:
        raise ParseError(1, "certificate needs 'coalition' and 'kind' lines")
    nu = _parse_match_lines(match_lines, inst)
    kind = BlockKind(extra.kind)
    evidence = ()
    if mu is not None:
        evidence = school_evidence(inst, extra.coalition, nu, mu,
                                   efficient=kind is BlockKind.EFFICIENT)
    return BlockCertificate(kind, frozenset(extra.coalition), nu, evidence)
