"""AMR graphs in PENMAN notation: parsing, serialization and graph queries.

Supported subset: ``(var / concept :role target ...)`` nodes, bare variable
references (re-entrancy, forward references allowed), quoted string and
symbolic/numeric constants, inverse ``-of`` roles and ``~e.N`` alignment
markers (kept, not interpreted). Variable scope is graph-global.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

_PREDICATE_RE = re.compile(r"^.+-\d{2}$")
_ALIGN_RE = re.compile(r"~[A-Za-z]*\.?[0-9,]+$")

# roles that end in "-of" but are not inverses
NON_INVERSE_ROLES = frozenset({":consist-of", ":prep-out-of", ":prep-on-behalf-of"})


class PenmanError(ValueError):
    """Malformed PENMAN input. ``line``/``column`` are 1-based."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line else ""
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class AmrNode:
    variable: str
    concept: str

    @property
    def is_predicate(self) -> bool:
        return bool(_PREDICATE_RE.match(self.concept))

    @property
    def lemma(self) -> str:
        """Concept without its sense suffix (``steal-01`` -> ``steal``)."""
        if self.is_predicate:
            return self.concept.rsplit("-", 1)[0]
        return self.concept


@dataclass(frozen=True)
class AmrEdge:
    source: str
    label: str
    target: str
    constant: bool = False

    @property
    def is_inverse(self) -> bool:
        return self.label.endswith("-of") and self.label not in NON_INVERSE_ROLES

    def normalized(self) -> AmrEdge:
        """Forward-direction equivalent: ``:R-of(a, b)`` becomes ``:R(b, a)``."""
        if self.constant or not self.is_inverse:
            return self
        return AmrEdge(self.target, self.label[:-3], self.source)


@dataclass(frozen=True)
class AmrGraph:
    root: str
    nodes: dict[str, AmrNode]
    edges: tuple[AmrEdge, ...]
    source_text: str = ""
    sentence_index: int = 0
    alignments: dict[str, str] = field(default_factory=dict)

    def node(self, variable: str) -> AmrNode:
        try:
            return self.nodes[variable]
        except KeyError:
            raise KeyError(f"unknown node {variable!r}") from None

    def triples(self) -> list[tuple[str, str, str]]:
        """Instance and role triples; the canonical content used for isomorphism."""
        out = [(v, ":instance", n.concept) for v, n in self.nodes.items()]
        out += [(e.source, e.label, e.target) for e in self.edges]
        return out

    def outgoing(self, variable: str) -> list[AmrEdge]:
        """Edges as written inside ``variable``'s parentheses."""
        return [e for e in self.edges if e.source == variable]

    def normalized_edges(self) -> list[AmrEdge]:
        return [e.normalized() for e in self.edges]

    def walk(self) -> Iterator[AmrNode]:
        """Depth-first document order from the root, each node once."""
        seen: set[str] = set()
        stack = [self.root]
        while stack:
            var = stack.pop()
            if var in seen:
                continue
            seen.add(var)
            yield self.nodes[var]
            children = [e.target for e in self.outgoing(var) if not e.constant]
            stack.extend(reversed(children))

    def parents(self, variable: str) -> list[tuple[str, str]]:
        """(parent, role) pairs under forward-normalized edges."""
        return [(e.source, e.label) for e in self.normalized_edges()
                if not e.constant and e.target == variable]

    def attribute(self, variable: str, label: str) -> str | None:
        for e in self.edges:
            if e.source == variable and e.label == label and e.constant:
                return e.target
        return None


def isomorphic(a: AmrGraph, b: AmrGraph) -> bool:
    """Equality up to edge order, with variable names preserved."""
    if a.root != b.root:
        return False
    return sorted(a.triples()) == sorted(b.triples())


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>\#[^\n]*)
      | (?P<lparen>\()
      | (?P<rparen>\))
      | (?P<slash>/)
      | (?P<string>"(?:[^"\\]|\\.)*"(?:~[A-Za-z]*\.?[0-9,]+)?)
      | (?P<role>:[^\s()"/]*)
      | (?P<symbol>[^\s()"/:]+(?::[^\s()"/]+)*)
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    at_line_start = True
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise PenmanError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "comment" and not at_line_start:
            raise PenmanError("'#' is only allowed at the start of a line", line, pos - line_start + 1)
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, chunk, line, pos - line_start + 1))
            at_line_start = False
        for i, ch in enumerate(chunk):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
                at_line_start = True
        pos = m.end()
    return tokens


def _split_alignment(token: str) -> tuple[str, str | None]:
    m = _ALIGN_RE.search(token)
    if m and m.start() > 0:
        return token[: m.start()], m.group()
    return token, None


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.nodes: dict[str, AmrNode] = {}
        self.edges: list[AmrEdge] = []
        self.alignments: dict[str, str] = {}
        # (edge index, token) for bare symbols resolved after the full parse
        self.pending: list[tuple[int, _Token]] = []

    def _peek(self) -> _Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _next(self, expect: str | None = None) -> _Token:
        tok = self._peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else _Token("", "", 1, 1)
            msg = "unbalanced parentheses: input ended early" if expect == "rparen" else "unexpected end of input"
            raise PenmanError(msg, last.line, last.column + len(last.text))
        if expect and tok.kind != expect:
            raise PenmanError(f"expected {expect}, found {tok.text!r}", tok.line, tok.column)
        self.i += 1
        return tok

    def parse(self) -> str:
        if not self.tokens:
            raise PenmanError("empty PENMAN text")
        root = self._node()
        extra = self._peek()
        if extra is not None:
            msg = "unbalanced parentheses: unexpected ')'" if extra.kind == "rparen" else f"trailing content {extra.text!r}"
            raise PenmanError(msg, extra.line, extra.column)
        for idx, tok in self.pending:
            edge = self.edges[idx]
            if edge.target in self.nodes:
                self.edges[idx] = AmrEdge(edge.source, edge.label, edge.target, constant=False)
        return root

    def _node(self) -> str:
        self._next("lparen")
        var_tok = self._next("symbol")
        var = var_tok.text
        if var in self.nodes:
            raise PenmanError(f"duplicate variable {var!r}", var_tok.line, var_tok.column)
        self._next("slash")
        concept_tok = self._next()
        if concept_tok.kind not in ("symbol", "string"):
            raise PenmanError(f"expected concept, found {concept_tok.text!r}", concept_tok.line, concept_tok.column)
        concept, align = _split_alignment(concept_tok.text)
        if align:
            self.alignments[var] = align
        self.nodes[var] = AmrNode(var, concept)
        while True:
            tok = self._peek()
            if tok is None:
                self._next("rparen")
            if tok.kind == "rparen":
                self.i += 1
                return var
            if tok.kind != "role":
                raise PenmanError(f"expected role or ')', found {tok.text!r}", tok.line, tok.column)
            self.i += 1
            label, role_align = _split_alignment(tok.text)
            if len(label) < 2:
                raise PenmanError("empty role label", tok.line, tok.column)
            target_tok = self._peek()
            if target_tok is None:
                self._next("rparen")
            if target_tok.kind == "lparen":
                child = self._node()
                self.edges.append(AmrEdge(var, label, child))
            elif target_tok.kind in ("symbol", "string"):
                self.i += 1
                value, _ = _split_alignment(target_tok.text) if target_tok.kind == "symbol" else (target_tok.text, None)
                self.edges.append(AmrEdge(var, label, value, constant=True))
                if target_tok.kind == "symbol":
                    self.pending.append((len(self.edges) - 1, target_tok))
            else:
                raise PenmanError(f"missing target for role {label}", target_tok.line, target_tok.column)
            if role_align:
                self.alignments[f"{var}{label}#{len(self.edges) - 1}"] = role_align


def parse_penman(text: str, sentence_index: int = 0) -> AmrGraph:
    """Parse one PENMAN graph. Lines starting with ``#`` are ignored."""
    if not text or not text.strip():
        raise PenmanError("empty PENMAN text")
    parser = _Parser(text)
    root = parser.parse()
    return AmrGraph(
        root=root,
        nodes=dict(parser.nodes),
        edges=tuple(parser.edges),
        source_text=text,
        sentence_index=sentence_index,
        alignments=dict(parser.alignments),
    )


# -- serialization ---------------------------------------------------------------


def serialize_penman(g: AmrGraph, indent: int | None = 4) -> str:
    """Write ``g`` back to PENMAN.

    A re-entrant node is defined at its first depth-first occurrence and
    referenced by variable afterwards. ``indent=None`` gives a single line.
    """
    defined: set[str] = set()
    out: list[str] = []

    def emit(var: str, depth: int) -> None:
        defined.add(var)
        out.append(f"({var} / {g.nodes[var].concept}{g.alignments.get(var, '')}")
        for edge in g.outgoing(var):
            out.append("\n" + " " * (indent * (depth + 1)) if indent is not None else " ")
            out.append(edge.label + " ")
            if edge.constant or edge.target in defined:
                out.append(edge.target)
            else:
                emit(edge.target, depth + 1)
        out.append(")")

    emit(g.root, 0)
    return "".join(out)


# -- queries ---------------------------------------------------------------------


def predicate_nodes(g: AmrGraph) -> list[AmrNode]:
    """Predicate (sense-labelled) nodes in depth-first document order."""
    return [n for n in g.walk() if n.is_predicate]


def arguments_of(g: AmrGraph, predicate: str) -> dict[str, str]:
    """Role -> node variable for ``predicate``, with ``-of`` edges turned forward.

    Constants are excluded (see :meth:`AmrGraph.attribute`). When a role
    repeats, the first occurrence is kept.
    """
    g.node(predicate)
    args: dict[str, str] = {}
    for edge in g.normalized_edges():
        if edge.source == predicate and not edge.constant:
            args.setdefault(edge.label, edge.target)
    return args


def is_negated(g: AmrGraph, variable: str) -> bool:
    return any(e.source == variable and e.label == ":polarity" and e.target == "-" for e in g.edges)


def unquote(value: str) -> str:
    if len(value) >= 2 and value[0] == value[-1] == '"':
        return re.sub(r"\\(.)", r"\1", value[1:-1])
    return value


# -- files -----------------------------------------------------------------------


def split_blocks(text: str) -> list[str]:
    """Split a multi-graph file into PENMAN blocks (blank-line separated).

    Blocks consisting only of ``#`` comment lines are dropped.
    """
    blocks = []
    for chunk in re.split(r"\n\s*\n", text):
        body = [ln for ln in chunk.split("\n") if ln.strip() and not ln.lstrip().startswith("#")]
        if body:
            blocks.append(chunk.strip("\n"))
    return blocks


def read_amr_file(path: str | Path) -> list[AmrGraph]:
    """Read a per-case ``<case_id>.amr.txt`` file; graph i belongs to sentence i."""
    text = Path(path).read_text(encoding="utf-8")
    return [parse_penman(block, i) for i, block in enumerate(split_blocks(text))]
