"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from casekb.amr import AmrEdge, AmrGraph, AmrNode

CONCEPTS = ["steal-01", "break-01", "enter-01", "kick-01", "turn-over-12", "person", "window",
            "door", "vehicle", "wallet", "name", "and", "before", "home", "suspect", "have-org-role-91"]
ROLES = [":ARG0", ":ARG1", ":ARG2", ":mod", ":location", ":time", ":op1", ":op2", ":part-of",
         ":ARG0-of", ":ARG1-of", ":poss", ":instrument", ":consist-of"]
CONSTANTS = st.one_of(
    st.sampled_from(["-", "+", "imperative"]),
    st.integers(-999, 99999).map(str),
    st.floats(0, 1000, allow_nan=False).map(lambda x: f"{x:.2f}"),
    st.text(st.characters(min_codepoint=32, max_codepoint=0x24F, blacklist_characters="\x7f"), max_size=12)
    .map(lambda s: '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'),
)


@st.composite
def amr_graphs(draw, max_nodes: int = 10) -> AmrGraph:
    """Rooted graphs built as a random tree plus re-entrant edges and constant attributes."""
    n = draw(st.integers(1, max_nodes))
    variables = [f"v{i}" for i in range(n)]
    nodes = {v: AmrNode(v, draw(st.sampled_from(CONCEPTS))) for v in variables}
    edges = []
    for i in range(1, n):
        parent = variables[draw(st.integers(0, i - 1))]
        edges.append(AmrEdge(parent, draw(st.sampled_from(ROLES)), variables[i]))
    for _ in range(draw(st.integers(0, 3))):
        src, tgt = draw(st.sampled_from(variables)), draw(st.sampled_from(variables))
        edges.append(AmrEdge(src, draw(st.sampled_from(ROLES)), tgt))
    for _ in range(draw(st.integers(0, 3))):
        edges.append(AmrEdge(draw(st.sampled_from(variables)), draw(st.sampled_from([":polarity", ":quant", ":value", ":op1"])),
                             draw(CONSTANTS), constant=True))
    return AmrGraph(variables[0], nodes, tuple(edges))


def triple_set(g: AmrGraph) -> set:
    """Independent comparison key: instance triples plus (source, role, target, is_constant)."""
    inst = {(v, node.concept) for v, node in g.nodes.items()}
    rel = sorted((e.source, e.label, e.target, e.constant) for e in g.edges)
    return g.root, inst, tuple(rel)
