"""Procedure notation parsing and the built-in reference library.

Two grammars are accepted:

  canonical   expr := term (op term)* ; term := RULE | '(' expr ')'
              RULE := ('S'|'R'|'M'|'D') '(' int ',' decimal ')'
              op := 'AND' | 'OR'          (equal precedence, left-assoc)

  Westgard    term ('/' term)* with terms  n_ks  or  R_ks ; '/' means OR.
              1_ks -> S(1,k), n_ks -> S(n,k), R_ks -> R(2,k).

Westgard counting terms here are the paper's absolute-value generic
forms, not the classical same-side-of-mean variants; 10_x has no generic
equivalent and is rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import ProcedureParseError
from .rules import (
    Leaf,
    Node,
    Operator,
    OperatorKind,
    Procedure,
    Rule,
    RuleKind,
)

_WESTGARD_TERM = re.compile(r"^(?:(\d+)|R)_(\d+(?:\.\d+)?)s$")
_KIND_BY_LETTER = {k.value: k for k in RuleKind}


@dataclass(frozen=True)
class LibraryEntry:
    name: str
    procedure: Procedure
    source: str  # "builtin" or "user_file"
    note: str = ""


def parse_procedure(text: str) -> Procedure:
    """Parse canonical or Westgard notation into a Procedure."""
    stripped = text.strip()
    if not stripped:
        raise ProcedureParseError("empty procedure text")
    if stripped.upper() == "NONE":
        return Procedure()
    if _looks_westgard(stripped):
        return _parse_westgard(stripped, text)
    return _parse_canonical(text)


def _looks_westgard(text: str) -> bool:
    return all(_WESTGARD_TERM.match(part.strip()) for part in text.split("/"))


def _parse_westgard(stripped: str, original: str) -> Procedure:
    rules = []
    for part in stripped.split("/"):
        term = part.strip()
        match = _WESTGARD_TERM.match(term)
        count, limit = match.groups()
        limit = float(limit)
        position = original.find(term)
        if count is None:
            rule = _make_rule(RuleKind.RANGE, 2, limit, term, position)
        else:
            rule = _make_rule(RuleKind.SINGLE_VALUE, int(count), limit, term, position)
        rules.append(rule)
    operators = tuple(Operator(OperatorKind.OR, 0) for _ in rules[1:])
    return Procedure(tuple(rules), operators)


def _make_rule(kind, n, limit, term, position) -> Rule:
    try:
        return Rule(kind, n, limit)
    except ValueError as exc:
        raise ProcedureParseError(
            f"term {term!r} is outside the generic-rule bounds: {exc}", position
        ) from exc


_TOKEN = re.compile(r"\s*(AND\b|OR\b|[SRMD]\(|\(|\)|$)")


def _parse_canonical(text: str) -> Procedure:
    tokens = _tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]]

    def advance():
        tok = tokens[pos[0]]
        pos[0] += 1
        return tok

    def parse_term():
        kind, value, offset = peek()
        if kind == "rule":
            advance()
            return Leaf(value)
        if kind == "lparen":
            advance()
            expr = parse_expr()
            kind, _, offset = peek()
            if kind != "rparen":
                raise ProcedureParseError("expected ')'", offset)
            advance()
            return expr
        raise ProcedureParseError("expected a rule or '('", offset)

    def parse_expr():
        left = parse_term()
        while peek()[0] == "op":
            _, op_kind, _ = advance()
            right = parse_term()
            left = Node(op_kind, left, right)
        return left

    tree = parse_expr()
    kind, _, offset = peek()
    if kind != "end":
        raise ProcedureParseError("unexpected trailing input", offset)
    return tree_to_procedure(tree)


_RULE_BODY = re.compile(r"\s*(\d+)\s*,\s*(\d+(?:\.\d+)?)\s*\)")


def _tokenize(text: str):
    tokens = []
    i = 0
    while i <= len(text):
        match = _TOKEN.match(text, i)
        if match is None:
            raise ProcedureParseError("unrecognized token", i)
        tok = match.group(1)
        start = match.start(1)
        if tok == "":
            tokens.append(("end", None, len(text)))
            break
        if tok in ("AND", "OR"):
            tokens.append(("op", OperatorKind[tok], start))
        elif tok == "(":
            tokens.append(("lparen", None, start))
        elif tok == ")":
            tokens.append(("rparen", None, start))
        else:  # rule head like "S("
            body = _RULE_BODY.match(text, match.end(1))
            if body is None:
                raise ProcedureParseError(
                    f"malformed rule after {tok!r}", start
                )
            n, limit = int(body.group(1)), float(body.group(2))
            rule = _make_rule(
                _KIND_BY_LETTER[tok[0]], n, limit, text[start : body.end()], start
            )
            tokens.append(("rule", rule, start))
            i = body.end()
            continue
        i = match.end(1)
    return tokens


def tree_to_procedure(
    tree, levels: Optional[int] = None, per_level: Optional[int] = None
) -> Procedure:
    """Flatten a tree into a rule/operator sequence whose priorities
    reproduce the grouping under precedence climbing (deeper operators
    bind tighter)."""
    rules, operators = [], []

    def walk(node, depth):
        if isinstance(node, Leaf):
            rules.append(node.rule)
            return
        if depth > 3:
            raise ProcedureParseError(
                "nesting too deep: operator priorities only span 0..3"
            )
        walk(node.left, depth + 1)
        operators.append(Operator(node.op, depth))
        walk(node.right, depth + 1)

    if tree is not None:
        walk(tree, 0)
    return Procedure(tuple(rules), tuple(operators), levels, per_level)


def builtin_library() -> list:
    """Reconstructable subset of the reference comparison library."""
    entries = []
    sweep_note = "single-value sweep 1_vs, v = 2.0 + 0.1k"
    for k in range(21):
        name = f"1_{2.0 + 0.1 * k:.1f}s"
        entries.append(
            LibraryEntry(name, parse_procedure(name), "builtin", sweep_note)
        )
    combos = [
        ("1_3.0s/2_2.0s/R_4.0s", "classic multirule combination"),
        ("1_2.5s/2_2.0s", "reference combination"),
        ("1_2.5s/2_2.0s/R_4s", "reference combination"),
        ("1_2.5s/2_2.0s/4_1s", "reference combination"),
        ("1_2.5s/2_2.0s/R_4s/4_1s", "reference combination"),
        (
            "1_3.0s/2_2.0s/R_4.0s/4_1.0s",
            "Westgard multirule without its 10_x term; counting rules beyond "
            "4 consecutive values are not expressible in the generic classes",
        ),
    ]
    for name, note in combos:
        entries.append(LibraryEntry(name, parse_procedure(name), "builtin", note))
    return entries


def load_library_file(path) -> list:
    """Load `name = notation` lines; '#' starts a comment."""
    entries = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ProcedureParseError(
                f"{path}:{lineno}: expected 'name = notation'"
            )
        name, notation = (part.strip() for part in line.split("=", 1))
        try:
            procedure = parse_procedure(notation)
        except ProcedureParseError as exc:
            raise ProcedureParseError(f"{path}:{lineno}: {exc}") from exc
        entries.append(LibraryEntry(name, procedure, "user_file"))
    return entries
