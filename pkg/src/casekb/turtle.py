"""Line-oriented Turtle export and import for case knowledge bases.

Each assertion is written as one triple on its own line, followed by a
comment carrying its provenance and evidence, e.g.::

    kb:e0_s rdf:type crm:TheftEvent .  # narrative s0

The reader accepts exactly this subset, which is enough for lossless
round-trips of a :class:`~casekb.ontology.CaseKB`.
"""

from __future__ import annotations

import re
from urllib.parse import quote, unquote

from .ontology import Assertion, CaseKB, Schema, default_schema

ONTO_NS = "urn:casekb:onto#"
PREFIXES = {
    "crm": ONTO_NS,
    "owl": "http://www.w3.org/2002/07/owl#",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}
_LOCAL_OK = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")
_TRIPLE_RE = re.compile(
    r'^(?P<s>\S+)\s+(?P<p>\S+)\s+(?P<o>"(?:[^"\\]|\\.)*"(?:\^\^\S+)?|\S+)\s+\.'
    r'(?:\s+#\s*(?P<prov>\w+)\s+(?P<ev>\S+))?\s*$'
)


class TurtleError(ValueError):
    pass


def case_namespace(case_id: str) -> str:
    return f"urn:casekb:case:{quote(case_id, safe='')}#"


def _local(name: str) -> str:
    if _LOCAL_OK.match(name):
        return name
    # underscores are percent-encoded first so every "_x" in the result marks an escape
    return "_" + quote(name, safe="").replace("_", "%5F").replace("%", "_x")


def _unlocal(local: str) -> str:
    if local.startswith("_"):
        return unquote(local[1:].replace("_x", "%"))
    return local


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t", "\b": "\\b", "\f": "\\f"}
_UNESCAPES = {v[1]: k for k, v in _ESCAPES.items()}


def _escape(value: str) -> str:
    return "".join(_ESCAPES.get(c) or (f"\\u{ord(c):04X}" if ord(c) < 0x20 or c == "\x7f" else c) for c in value)


def _unescape(value: str) -> str:
    def sub(m: re.Match) -> str:
        return chr(int(m.group(1), 16)) if m.group(1) else _UNESCAPES[m.group(2)]
    return re.sub(r'\\u([0-9A-Fa-f]{4})|\\([\\"nrtbf])', sub, value)


def _evidence_token(a: Assertion) -> str:
    if isinstance(a.evidence, int):
        return f"s{a.evidence}"
    return "none" if a.evidence is None else f"m:{a.evidence}"


def _parse_evidence(tok: str | None):
    if tok is None or tok == "none":
        return None
    if tok.startswith("s") and tok[1:].isdigit():
        return int(tok[1:])
    if tok.startswith("m:"):
        return tok[2:]
    raise TurtleError(f"bad evidence token {tok!r}")


def export_turtle(kb: CaseKB) -> str:
    lines = [f"@prefix {p}: <{iri}> ." for p, iri in sorted(PREFIXES.items())]
    lines.append(f"@prefix kb: <{case_namespace(kb.case_id)}> .")
    lines.append("")
    rows = []
    for a in kb.assertions.values():
        s = f"kb:{_local(a.subject)}"
        if a.kind == "ClassAssertion":
            p, o = "rdf:type", f"crm:{a.object}"
        elif a.kind == "DifferentFrom":
            p, o = "owl:differentFrom", f"kb:{_local(a.object)}"
        elif a.kind == "ObjectPropertyAssertion":
            p, o = f"crm:{a.predicate}", f"kb:{_local(a.object)}"
        else:
            p, o = f"crm:{a.predicate}", f'"{_escape(a.object)}"^^xsd:{a.datatype or "string"}'
        rows.append((s, p, o, f"{s} {p} {o} .  # {a.provenance} {_evidence_token(a)}"))
    lines.extend(r[3] for r in sorted(rows))
    return "\n".join(lines) + "\n"


def import_turtle(text: str, schema: Schema | None = None) -> CaseKB:
    """Read text produced by :func:`export_turtle` back into a kb."""
    prefixes: dict[str, str] = {}
    assertions = []
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("@prefix"):
            m = re.match(r"@prefix\s+(\w*):\s+<([^>]*)>\s*\.$", line)
            if not m:
                raise TurtleError(f"line {lineno}: bad prefix declaration")
            prefixes[m.group(1)] = m.group(2)
            continue
        m = _TRIPLE_RE.match(line)
        if not m:
            raise TurtleError(f"line {lineno}: unsupported triple syntax")
        s, p, o = m.group("s"), m.group("p"), m.group("o")
        prov = m.group("prov") or "narrative"
        ev = _parse_evidence(m.group("ev"))
        subj = _unlocal(s.split(":", 1)[1])
        if p == "rdf:type":
            assertions.append(Assertion("ClassAssertion", subj, "", o.split(":", 1)[1], prov, ev))
        elif p == "owl:differentFrom":
            assertions.append(Assertion("DifferentFrom", subj, "", _unlocal(o.split(":", 1)[1]), prov, ev))
        elif o.startswith('"'):
            lit = re.match(r'^"((?:[^"\\]|\\.)*)"(?:\^\^xsd:(\w+))?$', o)
            assertions.append(Assertion("DataPropertyAssertion", subj, p.split(":", 1)[1],
                                        _unescape(lit.group(1)), prov, ev, lit.group(2) or "string"))
        else:
            assertions.append(Assertion("ObjectPropertyAssertion", subj, p.split(":", 1)[1],
                                        _unlocal(o.split(":", 1)[1]), prov, ev))
    ns = prefixes.get("kb", "")
    m = re.match(r"urn:casekb:case:(.*)#$", ns)
    kb = CaseKB(unquote(m.group(1)) if m else "", schema or default_schema())
    kb.add(assertions)
    return kb
