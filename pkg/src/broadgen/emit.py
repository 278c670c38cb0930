"""Text renderings of kernel objects and the DOT emitters.

Every text form produced here is valid DSL expression syntax, so outputs can be
pasted back into documents and command flags.
"""
from __future__ import annotations

from .encodings import Tag, classify, is_numeral, unntuple, untup
from .hfset import HfSet
from .terms import decode_term


def _by_key(items):
    return sorted(items, key=lambda kv: kv[0].key)


def render(x: HfSet) -> str:
    """Numerals as decimals, anything else as a set literal."""
    if is_numeral(x):
        return str(len(x))
    return "{" + ",".join(render(y) for y in x.elements) + "}"


def render_tuple(f: HfSet, inner=render) -> str:
    entries = untup(f)
    if entries is None:
        return render(f)
    return "[" + ",".join(f"{render(k)}->{inner(v)}" for k, v in _by_key(entries.items())) + "]"


def render_term(t: HfSet) -> str:
    """<i,[k->t_k,...]>, the term as the pair it is."""
    d = decode_term(t)
    if d is None:
        return render(t)
    i, args = d
    inner = ",".join(f"{render(k)}->{render_term(a)}" for k, a in _by_key(args.items()))
    return f"<{render(i)},[{inner}]>"


def render_broad(x: HfSet) -> str:
    c = classify(x, "broad")
    if c.tag is Tag.Start:
        return "Start"
    if c.tag is Tag.Build and untup(c.args[2]) is not None:
        w, i, f = c.args
        return f"Build({render_broad(w)},{render(i)},{render_tuple(f, render_broad)})"
    return render(x)


def render_reduced(x: HfSet) -> str:
    c = classify(x, "reduced")
    if c.tag is Tag.Begin:
        return "Begin"
    if c.tag is Tag.Make and untup(c.args[1]) is not None:
        w, f = c.args
        return f"Make({render_reduced(w)},{render_tuple(f, render_reduced)})"
    return render(x)


def render_derivation(d: HfSet, broad: bool = False) -> str:
    """The s-expression form read by dsl.parse_derivation."""
    def sub(g: HfSet) -> str:
        entries = untup(g) or {}
        return "[" + " ".join(f"{render(k)}->{render_derivation(v, broad)}"
                              for k, v in _by_key(entries.items())) + "]"

    if broad:
        c = classify(d, "derivation")
        if c.tag is Tag.Basic:
            i, g, p = c.args
            return f"(basic {render(i)} {sub(g)} {render(p)})"
        if c.tag is Tag.Trigger:
            m, i, g, p = c.args
            return f"(trigger {render_derivation(m, True)} {render(i)} {sub(g)} {render(p)})"
        return render(d)
    t = unntuple(d, 3)
    if t is None:
        return render(d)
    i, g, p = t
    return f"({render(i)} {sub(g)} {render(p)})"


# -- DOT -----------------------------------------------------------------------------

def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot_term(t: HfSet, name: str = "term") -> str:
    """The term as a tree with its root on the left and positions on the edges."""
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    counter = [0]

    def walk(s: HfSet) -> str:
        node = f"n{counter[0]}"
        counter[0] += 1
        d = decode_term(s)
        if d is None:
            lines.append(f"  {node} [label={_quote(render(s))}, shape=box];")
            return node
        i, args = d
        lines.append(f"  {node} [label={_quote(render(i))}];")
        for k, a in _by_key(args.items()):
            child = walk(a)
            lines.append(f"  {node} -> {child} [label={_quote(render(k))}];")
        return node

    walk(t)
    lines.append("}")
    return "\n".join(lines) + "\n"


# edge styles for the three directions of a broad number
DEPTH_STYLE = 'style=bold, dim="depth"'
HORIZONTAL_STYLE = 'style=solid, dim="horizontal"'
VERTICAL_STYLE = 'style=dashed, dim="vertical"'


def emit_dot_broad(x: HfSet, name: str = "broad") -> str:
    """A broad number as a three-dimensional tree.

    Build(w, i, [a_k]) is a node labelled i with a depth edge back to w, so
    following depth edges ends at the Start leaf. When the tuple is inhabited
    a horizontal edge leads to a tuple node, whose vertical edges, labelled by
    position, reach the entries a_k. Shared substructure is drawn once.
    """
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    ids: dict = {}

    def walk(w: HfSet) -> str:
        if w in ids:
            return ids[w]
        node = f"n{len(ids)}"
        ids[w] = node
        c = classify(w, "broad")
        f = untup(c.args[2]) if c.tag is Tag.Build else None
        if c.tag is Tag.Start:
            lines.append(f"  {node} [label=\"Start\", shape=doublecircle];")
        elif f is None:
            lines.append(f"  {node} [label={_quote(render(w))}, shape=box];")
        else:
            prev, i, _ = c.args
            lines.append(f"  {node} [label={_quote(render(i))}];")
            back = walk(prev)
            lines.append(f"  {node} -> {back} [{DEPTH_STYLE}];")
            if f:
                box = f"{node}t"
                lines.append(f"  {box} [label=\"[]\", shape=box];")
                lines.append(f"  {node} -> {box} [{HORIZONTAL_STYLE}];")
                for k, a in _by_key(f.items()):
                    child = walk(a)
                    lines.append(f"  {box} -> {child} [label={_quote(render(k))}, {VERTICAL_STYLE}];")
        return node

    walk(x)
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dot(obj: HfSet, kind: str | None = None) -> str:
    """DOT for a term or a broad number; ``kind`` is 'term' or 'broad', and is
    guessed from the shape when omitted (terms first)."""
    if kind is None:
        kind = "term" if decode_term(obj) is not None else "broad"
    if kind == "term":
        return emit_dot_term(obj)
    if kind == "broad":
        return emit_dot_broad(obj)
    raise ValueError(f"unknown DOT kind {kind!r}")
