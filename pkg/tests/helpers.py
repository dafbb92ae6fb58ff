from codeviews.parsing import parse_snippet
from codeviews.symtab import build_symbol_table


def table_for(src: str):
    unit, cst = parse_snippet(src)
    return cst, build_symbol_table(cst)


def find(cst, kind: str, text: str | None = None, nth: int = 0):
    hits = [n for n in cst.walk() if n.kind == kind and (text is None or n.text == text)]
    return hits[nth]


def labelled(g, kind: str | None = None) -> dict:
    """label -> node id (labels are assumed unique in the fixture)."""
    return {n.label: n.id for n in g.nodes.values() if kind is None or n.kind == kind}


def edge_labels(g, kind: str | None = None, view: str | None = None) -> set:
    return {
        (g.nodes[e.src].label, g.nodes[e.dst].label, e.kind)
        for e in g.edges
        if (kind is None or e.kind == kind) and (view is None or e.view == view)
    }
