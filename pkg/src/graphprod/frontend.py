"""Text formats: presentation files, word expressions, and printing.

Presentation files are line oriented::

    # Example: path v1 - v2 - v3
    vertex v1 Z/3
    vertex v2 Z
    vertex v3 Z
    edge v1 v2
    edge v2 v3

Word expressions::

    expr   := term { "*" term }
    term   := factor [ "^" int ]
    factor := label | "1" | "(" expr ")" | "[" expr "," expr "]"
    int    := ["-"] digit+

``[x,y]`` is ``x^-1 y^-1 x y``.  A power of a single generator stays one
syllable; a power of anything else repeats the word.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from graphprod.graph import SimplicialGraph
from graphprod.parabolic import ParabolicSubgroup
from graphprod.words import NormalForm, Presentation, set_text, word_text

LABEL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_@]*")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


def parse_spec(text: str) -> Presentation:
    labels: list[str] = []
    orders: list[int | None] = []
    index: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    seen_edges: set[frozenset[int]] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if not tokens:
            continue
        head, col = tokens[0]
        if head == "vertex":
            if len(tokens) != 3:
                raise ParseError("expected 'vertex <label> Z' or 'vertex <label> Z/<n>'", lineno, col)
            (name, ncol), (grp, gcol) = tokens[1], tokens[2]
            if not LABEL_RE.fullmatch(name):
                raise ParseError(f"invalid label {name!r}", lineno, ncol)
            if name in index:
                raise ParseError(f"duplicate vertex {name!r}", lineno, ncol)
            if grp == "Z":
                order = None
            else:
                m = re.fullmatch(r"Z/(-?\d+)", grp)
                if not m:
                    raise ParseError(f"expected Z or Z/<n>, got {grp!r}", lineno, gcol)
                order = int(m.group(1))
                if order < 2:
                    raise ParseError(f"order below 2: {grp}", lineno, gcol + 2)
            index[name] = len(labels)
            labels.append(name)
            orders.append(order)
        elif head == "edge":
            if len(tokens) != 3:
                raise ParseError("expected 'edge <label> <label>'", lineno, col)
            ends = []
            for name, ncol in tokens[1:]:
                if name not in index:
                    raise ParseError(f"unknown label {name!r}", lineno, ncol)
                ends.append(index[name])
            u, v = ends
            if u == v:
                raise ParseError(f"self-edge at {tokens[1][0]!r}", lineno, tokens[2][1])
            key = frozenset(ends)
            if key in seen_edges:
                raise ParseError(f"duplicate edge {tokens[1][0]} {tokens[2][0]}", lineno, col)
            seen_edges.add(key)
            edges.append((u, v))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col)

    return Presentation(SimplicialGraph.from_edges(len(labels), edges), tuple(orders), tuple(labels))


def format_spec(p: Presentation) -> str:
    lines = []
    for lab, order in zip(p.labels, p.orders):
        lines.append(f"vertex {lab} " + ("Z" if order is None else f"Z/{order}"))
    for u, v in p.graph.edges():
        lines.append(f"edge {p.labels[u]} {p.labels[v]}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    column: int


def _tokenize(text: str, line: int) -> list[_Token]:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "*^()[],":
            out.append(_Token(ch, ch, i + 1))
            i += 1
            continue
        m = LABEL_RE.match(text, i)
        if m:
            out.append(_Token("label", m.group(), i + 1))
            i = m.end()
            continue
        m = re.compile(r"-?\d+").match(text, i)
        if m:
            out.append(_Token("int", m.group(), i + 1))
            i = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", line, i + 1)
    out.append(_Token("end", "", len(text) + 1))
    return out


def _inverse(word: list[tuple[int, int]]) -> list[tuple[int, int]]:
    return [(v, -e) for v, e in reversed(word)]


class _WordParser:
    def __init__(self, p: Presentation, text: str, line: int):
        self.p = p
        self.line = line
        self.tokens = _tokenize(text, line)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParseError(f"expected {what}, found {found}", self.line, tok.column)
        self.pos += 1
        return tok

    def parse(self) -> list[tuple[int, int]]:
        word = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            if tok.kind in ")]":
                raise ParseError(f"unbalanced {tok.text!r}", self.line, tok.column)
            raise ParseError(f"expected '*' or end of input, found {tok.text!r}", self.line, tok.column)
        return word

    def expr(self) -> list[tuple[int, int]]:
        word = self.term()
        while self.peek().kind == "*":
            self.pos += 1
            word = word + self.term()
        return word

    def term(self) -> list[tuple[int, int]]:
        single, word = self.factor()
        if self.peek().kind != "^":
            return word
        self.pos += 1
        tok = self.peek()
        if tok.kind != "int":
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParseError(f"malformed exponent: expected an integer, found {found}", self.line, tok.column)
        self.pos += 1
        k = int(tok.text)
        if single and word:
            v, e = word[0]
            return [(v, e * k)] if k else []
        if k < 0:
            word, k = _inverse(word), -k
        return word * k

    def factor(self) -> tuple[bool, list[tuple[int, int]]]:
        tok = self.peek()
        if tok.kind == "label":
            self.pos += 1
            try:
                v = self.p.labels.index(tok.text)
            except ValueError:
                raise ParseError(f"unknown generator {tok.text!r}", self.line, tok.column) from None
            return True, [(v, 1)]
        if tok.kind == "int":
            if tok.text != "1":
                raise ParseError(f"unexpected number {tok.text!r} (only '1' denotes the identity)", self.line, tok.column)
            self.pos += 1
            return False, []
        if tok.kind == "(":
            self.pos += 1
            word = self.expr()
            self._close(")", tok)
            return False, word
        if tok.kind == "[":
            self.pos += 1
            x = self.expr()
            self.take(",", "',' in commutator")
            y = self.expr()
            self._close("]", tok)
            return False, _inverse(x) + _inverse(y) + x + y
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"expected a generator, '1', '(' or '[', found {found}", self.line, tok.column)

    def _close(self, kind: str, opener: _Token) -> None:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"unbalanced {opener.text!r} opened at column {opener.column}", self.line, tok.column)
        self.pos += 1


def parse_word(p: Presentation, text: str, line: int = 1) -> list[tuple[int, int]]:
    return _WordParser(p, text, line).parse()


def parse_vertex_set(p: Presentation, text: str) -> frozenset[int]:
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    out = set()
    col = text.find(body) + 1 if body else 1
    for part in body.split(",") if body.strip() else []:
        name = part.strip()
        if name not in p.labels:
            raise ParseError(f"unknown label {name!r}", 1, col + part.find(name) if name else col)
        out.add(p.labels.index(name))
        col += len(part) + 1
    return frozenset(out)


def parse_parabolic(p: Presentation, text: str) -> tuple[list[tuple[int, int]], frozenset[int]]:
    """``WORD:SET``, e.g. ``c:a`` for ``c G_{a} c^-1`` or ``1:a,b``."""
    if ":" not in text:
        raise ParseError("expected CONJUGATOR:VERTEX-SET", 1, 1)
    word, _, rest = text.partition(":")
    try:
        vs = parse_vertex_set(p, rest)
    except ParseError as err:
        raise ParseError(err.message, 1, err.column + len(word) + 1) from None
    return parse_word(p, word), vs


def format_word(p: Presentation, x: NormalForm) -> str:
    return word_text(p, x.syllables)


def format_set(p: Presentation, vertices) -> str:
    return set_text(p, vertices)


def format_parabolic(p: Presentation, P: ParabolicSubgroup) -> str:
    return f"{format_word(p, P.conjugator)}:{format_set(p, P.base)}"
