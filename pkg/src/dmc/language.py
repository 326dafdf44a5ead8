"""Problem-definition language: a line-oriented keyword grammar for variables,
base/meta constraints, activators and the initially-active set, plus the
serializer that round-trips documents.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    Activator,
    ActivatorAction,
    BaseRelation,
    CondKind,
    ConstraintNetwork,
    ConstraintNode,
    Receiver,
    RelKind,
    Variable,
)


class DmcError(Exception):
    pass


class DmcSyntaxError(DmcError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class DmcSemanticError(DmcError):
    def __init__(self, messages: list[str]):
        super().__init__("; ".join(messages))
        self.messages = messages


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    col: int
    is_string: bool = False


_PUNCT = "{}[]:"


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    for ln, line in enumerate(text.splitlines(), start=1):
        i = 0
        n = len(line)
        while i < n:
            ch = line[i]
            if ch == "#":
                break
            if ch.isspace():
                i += 1
                continue
            col = i + 1
            if ch == '"':
                j = line.find('"', i + 1)
                if j < 0:
                    raise DmcSyntaxError(ln, col, "unterminated string")
                tokens.append(_Token(line[i + 1:j], ln, col, is_string=True))
                i = j + 1
            elif ch in _PUNCT:
                tokens.append(_Token(ch, ln, col))
                i += 1
            elif ch == "=":
                tokens.append(_Token("=", ln, col))
                i += 1
            elif ch == "!" and i + 1 < n and line[i + 1] == "=":
                tokens.append(_Token("!=", ln, col))
                i += 2
            else:
                j = i
                while j < n and not line[j].isspace() and line[j] not in _PUNCT \
                        and line[j] not in "=!\"#":
                    j += 1
                if j == i:
                    raise DmcSyntaxError(ln, col, f"unexpected character {ch!r}")
                tokens.append(_Token(line[i:j], ln, col))
                i = j
    return tokens


@dataclass
class VarDecl:
    id: str
    domain: list[str]
    initial: bool = False


@dataclass
class BaseDecl:
    id: str
    variable: str
    op: RelKind
    value: str


@dataclass
class MetaDecl:
    kind: Receiver
    id: str
    min_count: int | None
    max_count: int | None
    children: list[str]


@dataclass
class ActivatorDecl:
    id: str
    condition_kind: CondKind
    condition_ref: str
    action: ActivatorAction
    targets: list[str]


@dataclass
class ProblemDocument:
    name: str
    variables: list[VarDecl] = field(default_factory=list)
    constraints: list[BaseDecl | MetaDecl] = field(default_factory=list)
    activators: list[ActivatorDecl] = field(default_factory=list)
    active: list[str] = field(default_factory=list)

    def to_network(self) -> ConstraintNetwork:
        return _build_network(self)


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def _here(self) -> tuple[int, int]:
        if self.pos < len(self.tokens):
            t = self.tokens[self.pos]
            return t.line, t.col
        if self.tokens:
            t = self.tokens[-1]
            return t.line, t.col + len(t.text)
        return 1, 1

    def error(self, message: str) -> DmcSyntaxError:
        line, col = self._here()
        return DmcSyntaxError(line, col, message)

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self) -> str | None:
        return None if self.at_end() else self.tokens[self.pos].text

    def take(self) -> _Token:
        if self.at_end():
            raise self.error("unexpected end of input")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.take()
        if tok.text != text or tok.is_string:
            raise DmcSyntaxError(tok.line, tok.col, f"expected {text!r}, found {tok.text!r}")
        return tok

    def ident(self, what: str = "identifier") -> str:
        tok = self.take()
        if tok.is_string or tok.text in _PUNCT or tok.text in ("=", "!="):
            raise DmcSyntaxError(tok.line, tok.col, f"expected {what}, found {tok.text!r}")
        return tok.text

    def integer(self, what: str) -> int:
        tok = self.take()
        if not tok.text.isdigit():
            raise DmcSyntaxError(tok.line, tok.col, f"expected {what}, found {tok.text!r}")
        return int(tok.text)

    def id_list(self, allow_empty: bool) -> list[str]:
        self.expect("[")
        out: list[str] = []
        while self.peek() != "]":
            out.append(self.ident())
        self.expect("]")
        if not out and not allow_empty:
            raise self.error("expected at least one identifier")
        return out


def parse(text: str) -> ProblemDocument:
    """Parse a problem document; raises DmcSyntaxError at the first syntax
    error, DmcSemanticError with all collected reference problems."""
    p = _Parser(_tokenize(text))
    p.expect("problem")
    name_tok = p.take()
    if not name_tok.is_string:
        raise DmcSyntaxError(name_tok.line, name_tok.col, "expected a quoted problem name")
    doc = ProblemDocument(name_tok.text)

    while not p.at_end():
        kw = p.take()
        if kw.text == "var":
            vid = p.ident("variable name")
            p.expect("{")
            domain = []
            while p.peek() != "}":
                domain.append(p.ident("domain value"))
            p.expect("}")
            if not domain:
                raise DmcSyntaxError(kw.line, kw.col, f"variable {vid}: empty domain")
            initial = False
            if p.peek() == "initial":
                p.take()
                initial = True
            doc.variables.append(VarDecl(vid, domain, initial))
        elif kw.text == "base":
            cid = p.ident("constraint name")
            p.expect(":")
            var = p.ident("variable name")
            op_tok = p.take()
            if op_tok.text not in ("=", "!="):
                raise DmcSyntaxError(op_tok.line, op_tok.col,
                                     f"expected '=' or '!=', found {op_tok.text!r}")
            value = p.ident("domain value")
            op = RelKind.EQUAL if op_tok.text == "=" else RelKind.NOT_EQUAL
            doc.constraints.append(BaseDecl(cid, var, op, value))
        elif kw.text in ("meta", "receiver", "allreceiver", "top"):
            kind = Receiver(kw.text)
            cid = p.ident("constraint name")
            lo = hi = None
            if p.peek() == "min":
                if kind in (Receiver.ALL_RECEIVER, Receiver.TOP):
                    raise p.error(f"{kw.text} constraints derive min/max; remove them")
                p.take()
                lo = p.integer("min bound")
                p.expect("max")
                hi = p.integer("max bound")
            elif kind in (Receiver.STANDARD, Receiver.RECEIVER):
                raise p.error(f"{kw.text} constraints require min/max bounds")
            p.expect("children")
            children = p.id_list(allow_empty=True)
            doc.constraints.append(MetaDecl(kind, cid, lo, hi, children))
        elif kw.text == "activator":
            aid = p.ident("activator name")
            p.expect("when")
            cond_tok = p.take()
            if cond_tok.text == "satisfied":
                ck = CondKind.CONSTRAINT_SATISFIED
            elif cond_tok.text == "variable-active":
                ck = CondKind.VARIABLE_ACTIVE
            else:
                raise DmcSyntaxError(cond_tok.line, cond_tok.col,
                                     f"expected 'satisfied' or 'variable-active', found {cond_tok.text!r}")
            ref = p.ident()
            action_tok = p.take()
            if action_tok.text == "activate":
                action = ActivatorAction.ACTIVATE
            elif action_tok.text == "require-inactive":
                action = ActivatorAction.REQUIRE_INACTIVE
            else:
                raise DmcSyntaxError(action_tok.line, action_tok.col,
                                     f"expected 'activate' or 'require-inactive', found {action_tok.text!r}")
            targets = p.id_list(allow_empty=False)
            doc.activators.append(ActivatorDecl(aid, ck, ref, action, targets))
        elif kw.text == "active":
            doc.active.extend(p.id_list(allow_empty=False))
        else:
            raise DmcSyntaxError(kw.line, kw.col, f"unknown declaration {kw.text!r}")

    _check_references(doc)
    return doc


def _check_references(doc: ProblemDocument) -> None:
    problems: list[str] = []
    seen: set[str] = set()
    for v in doc.variables:
        if v.id in seen:
            problems.append(f"duplicate id: {v.id}")
        seen.add(v.id)
    con_ids = set()
    for c in doc.constraints:
        if c.id in seen:
            problems.append(f"duplicate id: {c.id}")
        seen.add(c.id)
        con_ids.add(c.id)
    var_ids = {v.id for v in doc.variables}
    for c in doc.constraints:
        if isinstance(c, BaseDecl):
            if c.variable not in var_ids:
                problems.append(f"base {c.id}: unknown variable {c.variable}")
        else:
            for ch in c.children:
                if ch not in con_ids:
                    problems.append(f"{c.kind.value} {c.id}: unknown child {ch}")
    for a in doc.activators:
        if a.id in seen:
            problems.append(f"duplicate id: {a.id}")
        seen.add(a.id)
        if a.condition_kind is CondKind.CONSTRAINT_SATISFIED and a.condition_ref not in con_ids:
            problems.append(f"activator {a.id}: unknown condition constraint {a.condition_ref}")
        if a.condition_kind is CondKind.VARIABLE_ACTIVE and a.condition_ref not in var_ids:
            problems.append(f"activator {a.id}: unknown condition variable {a.condition_ref}")
        for t in a.targets:
            if t not in con_ids:
                problems.append(f"activator {a.id}: unknown target {t}")
    for cid in doc.active:
        if cid not in con_ids:
            problems.append(f"active list: unknown constraint {cid}")
    tops = [c.id for c in doc.constraints if isinstance(c, MetaDecl) and c.kind is Receiver.TOP]
    if len(tops) != 1:
        problems.append(f"expected exactly one top constraint, found {len(tops)}")
    if problems:
        raise DmcSemanticError(problems)


def _build_network(doc: ProblemDocument) -> ConstraintNetwork:
    variables = [Variable(v.id, list(v.domain), v.initial) for v in doc.variables]
    constraints = []
    top = ""
    for c in doc.constraints:
        if isinstance(c, BaseDecl):
            constraints.append(ConstraintNode(
                c.id, variable=c.variable, relation=BaseRelation(c.op, c.value)))
        else:
            if c.kind is Receiver.TOP:
                top = c.id
            constraints.append(ConstraintNode(
                c.id, receiver=c.kind,
                min_count=c.min_count or 0, max_count=c.max_count or 0,
                children=list(c.children)))
    activators = [
        Activator(a.id, a.condition_kind, a.condition_ref, a.action, list(a.targets))
        for a in doc.activators
    ]
    return ConstraintNetwork(variables, constraints, activators, top, set(doc.active))


def serialize(doc: ProblemDocument) -> str:
    """Canonical text form; parse(serialize(doc)) is structurally equal to doc."""
    lines = [f'problem "{doc.name}"', ""]
    for v in doc.variables:
        suffix = " initial" if v.initial else ""
        lines.append(f"var {v.id} {{ {' '.join(v.domain)} }}{suffix}")
    lines.append("")
    for c in doc.constraints:
        if isinstance(c, BaseDecl):
            lines.append(f"base {c.id}: {c.variable} {c.op.value} {c.value}")
        else:
            bounds = ""
            if c.kind in (Receiver.STANDARD, Receiver.RECEIVER):
                bounds = f" min {c.min_count} max {c.max_count}"
            lines.append(f"{c.kind.value} {c.id}{bounds} children [ {' '.join(c.children)} ]")
    if doc.activators:
        lines.append("")
    for a in doc.activators:
        lines.append(
            f"activator {a.id} when {a.condition_kind.value} {a.condition_ref} "
            f"{a.action.value} [ {' '.join(a.targets)} ]"
        )
    lines.append("")
    lines.append(f"active [ {' '.join(doc.active)} ]")
    lines.append("")
    return "\n".join(lines)
