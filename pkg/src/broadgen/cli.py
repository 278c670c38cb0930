"""Command-line interface.

Exit status is 0 on success, 1 on user error (bad flags, bad documents, bad
input objects) and 2 when a budget runs out. Every emission is deterministic:
collections are ordered by depth and then by their text form.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from typing import Any, Callable

from . import dsl, emit
from .broadnum import (
    broad_stages, generate_reduced, generate_u, is_broad_number, theta_reduce,
)
from .errors import BroadgenError, BudgetExceeded
from .genengine import (
    BroadRubric, Budget, derivation_depth, eval_derivation, eval_derivation_broad,
    generate_family, generate_set,
)
from .hfset import HfSet, serialize
from .ordinal import (
    OMEGA_SYMBOL, add, compare, hartogs, is_k_complete, is_limit, is_regular,
    is_successor, lindenbaum, parse_cnf, succ, v_stage,
)
from .terms import generate_terms, height
from .universes import show_code, tarski_universe

FORMATS = ("text", "json", "dot")
COMMANDS = ("terms", "set", "family", "broad", "reduced", "translate", "eval", "viz",
            "ordinal", "vstage", "hartogs", "tarski")
DEFAULT_DEPTH = {"terms": 3, "set": 8, "family": 3, "broad": 2, "reduced": 3,
                 "translate": 2, "tarski": 2}
DEFAULT_ELEMENTS = 20_000


class UsageError(BroadgenError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def prelude_text() -> str:
    return resources.files("broadgen").joinpath("prelude.bg").read_text(encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="broadgen", description="Generate and inspect inductively defined sets.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("arg", nargs="?", help="positional argument of ordinal, vstage and hartogs")
    p.add_argument("--doc", metavar="FILE", help="definitions file (default: the built-in prelude)")
    for flag in ("sig", "rubric", "broadrubric", "broadsig", "reducedsig", "famofsets", "budget"):
        p.add_argument(f"--{flag}", metavar="NAME")
    p.add_argument("--depth", type=int)
    p.add_argument("--fuel", type=int)
    p.add_argument("--elements", type=int)
    p.add_argument("--format", choices=FORMATS, default="text")
    p.add_argument("--deriv", metavar="TEXT", help="derivation such as '(1 [] 50)'")
    p.add_argument("--term", metavar="EXPR", help="a term such as '<6,[]>'")
    p.add_argument("--thing", metavar="EXPR", help="a set, e.g. a broad number 'Build(Start,5,[])'")
    p.add_argument("--compare", metavar="ORD", help="second ordinal for the ordinal command")
    return p


# -- helpers ---------------------------------------------------------------------

def _load_doc(args) -> dsl.SpecDoc:
    if args.doc is None:
        return dsl.parse_spec(prelude_text())
    try:
        with open(args.doc, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {args.doc}: {e.strerror}") from None
    return dsl.parse_spec(text)


def _budget(args, d: dsl.Desugarer, depth_default: int) -> Budget:
    settings = {"depth": depth_default, "elements": DEFAULT_ELEMENTS,
                "fuel": Budget().fuel}
    if args.budget:
        settings.update(d.budget(args.budget))
    for key in ("depth", "elements", "fuel"):
        v = getattr(args, key)
        if v is not None:
            settings[key] = v
    try:
        return Budget(**settings)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _need(args, *flags: str) -> str:
    for f in flags:
        if getattr(args, f):
            return f
    raise UsageError(f"{args.command} needs " + " or ".join(f"--{f}" for f in flags))


def _expr(text: str) -> HfSet:
    return dsl.thing(dsl.parse_expr(text))


RAW_LIMIT = 4096


def _raw(x: HfSet) -> str | None:
    """Kernel text of x, or None when it would exceed RAW_LIMIT characters."""
    try:
        return serialize(x, max_chars=RAW_LIMIT)
    except BudgetExceeded:
        return None


def _ordered(items, stage: Callable, text: Callable) -> list:
    return sorted(items, key=lambda x: (stage(x), len(text(x)), text(x)))


def _rubric(args, d: dsl.Desugarer):
    which = _need(args, "rubric", "broadrubric")
    return d.rubric(args.rubric) if which == "rubric" else d.broadrubric(args.broadrubric)


# -- commands ----------------------------------------------------------------------
# Each returns (json result, text lines); viz may return DOT text instead.

def cmd_terms(args, d):
    S = d.signature(args.sig or _need(args, "sig"))
    b = _budget(args, d, DEFAULT_DEPTH["terms"])
    terms = generate_terms(S, b.depth, max_terms=b.elements)
    rows = [{"term": emit.render_term(t), "height": height(t), "raw": _raw(t)}
            for t in _ordered(terms, height, emit.render_term)]
    text = [f"{r['height']}  {r['term']}" for r in rows] + [f"{len(rows)} terms of height <= {b.depth}"]
    return {"depth": b.depth, "count": len(rows), "terms": rows}, text


def cmd_set(args, d):
    r = _rubric(args, d)
    b = _budget(args, d, DEFAULT_DEPTH["set"])
    g = generate_set(r, b)
    rows = [{"value": emit.render(x), "stage": g.stage[x]}
            for x in _ordered(g.elements, g.stage.__getitem__, emit.render)]
    text = [f"{r['stage']}  {r['value']}" for r in rows]
    text.append(f"{len(rows)} elements, {'stabilized' if g.stabilized else 'not stabilized'}")
    return {"depth": b.depth, "count": len(rows), "stabilized": g.stabilized,
            "elements": rows}, text


def cmd_family(args, d):
    r = _rubric(args, d)
    broad = isinstance(r, BroadRubric)
    b = _budget(args, d, DEFAULT_DEPTH["family"])
    fam = generate_family(r, b)
    show = lambda k: emit.render_derivation(k, broad)
    rows = [{"derivation": show(k), "value": emit.render(fam.entries[k]), "depth": fam.stage[k]}
            for k in _ordered(fam.entries, fam.stage.__getitem__, show)]
    text = [f"{r['depth']}  {r['derivation']} => {r['value']}" for r in rows]
    text.append(f"{len(rows)} derivations, {'stabilized' if fam.stabilized else 'not stabilized'}")
    return {"depth": b.depth, "count": len(rows), "stabilized": fam.stabilized,
            "range": sorted({r["value"] for r in rows}, key=lambda v: (len(v), v)),
            "entries": rows}, text


def cmd_broad(args, d):
    G = d.broadsig(args.broadsig or _need(args, "broadsig"))
    b = _budget(args, d, DEFAULT_DEPTH["broad"])
    if args.thing:
        x = _expr(args.thing)
        ok = is_broad_number(G, x)
        return {"number": emit.render_broad(x), "member": ok}, [
            f"{emit.render_broad(x)} is {'' if ok else 'not '}a broad number"]
    stage, _ = broad_stages(G, b.depth, b)
    rows = [{"number": emit.render_broad(x), "depth": stage[x], "raw": _raw(x)}
            for x in _ordered(stage, stage.__getitem__, emit.render_broad)]
    text = [f"{r['depth']}  {r['number']}" for r in rows] + [f"{len(rows)} broad numbers"]
    return {"depth": b.depth, "count": len(rows), "numbers": rows}, text


def cmd_reduced(args, d):
    F = d.reducedsig(args.reducedsig or _need(args, "reducedsig"))
    b = _budget(args, d, DEFAULT_DEPTH["reduced"])
    xs = generate_reduced(F, b.depth, b)
    rows = [{"number": emit.render_reduced(x), "raw": _raw(x)}
            for x in _ordered(xs, lambda x: 0, emit.render_reduced)]
    text = [r["number"] for r in rows] + [f"{len(rows)} reduced broad numbers"]
    return {"depth": b.depth, "count": len(rows), "numbers": rows}, text


def cmd_translate(args, d):
    """Broad numbers to their reduced encodings and back."""
    G = d.broadsig(args.broadsig or _need(args, "broadsig"))
    b = _budget(args, d, DEFAULT_DEPTH["translate"])
    stage, _ = broad_stages(G, b.depth, b)
    memo_b, memo_f = {}, {}
    rows, encodings = [], set()
    for x in _ordered(stage, stage.__getitem__, emit.render_broad):
        u = theta_reduce("backward", x, G, memo_b)
        encodings.add(u)
        back = theta_reduce("forward", u, None, memo_f)
        rows.append({"number": emit.render_broad(x), "encoding": _raw(u),
                     "round_trip": back is x})
    matches = encodings == set(generate_u(G, b.depth, b))
    text = [f"{r['number']}  {'ok' if r['round_trip'] else 'MISMATCH'}" for r in rows]
    text.append(f"{len(rows)} numbers translated; image equals the generated encodings: {matches}")
    return {"depth": b.depth, "count": len(rows), "matches_generated": matches,
            "rows": rows}, text


def cmd_eval(args, d):
    r = _rubric(args, d)
    if not args.deriv:
        raise UsageError("eval needs --deriv")
    deriv = dsl.parse_derivation(args.deriv)
    broad = isinstance(r, BroadRubric)
    v = eval_derivation_broad(r, deriv) if broad else eval_derivation(r, deriv)
    return {"derivation": emit.render_derivation(deriv, broad),
            "depth": derivation_depth(deriv, broad),
            "value": emit.render(v), "raw": _raw(v)}, [emit.render(v)]


def cmd_viz(args, d):
    if args.term:
        obj, kind, shown = _expr(args.term), "term", emit.render_term
    elif args.thing:
        obj, kind, shown = _expr(args.thing), "broad", emit.render_broad
    else:
        raise UsageError("viz needs --term or --thing")
    dot = emit.emit_dot(obj, kind)
    return {"kind": kind, "object": shown(obj), "dot": dot}, dot


def cmd_ordinal(args, d):
    if not args.arg:
        raise UsageError("ordinal needs an ordinal such as 'w^2*3+4'")
    a = parse_cnf(args.arg)
    out: dict[str, Any] = {
        "ordinal": str(a), "finite": a.is_finite, "successor": is_successor(a),
        "limit": is_limit(a), "regular": is_regular(a),
        "omega_complete": is_k_complete(a, OMEGA_SYMBOL), "succ": str(succ(a)),
    }
    if args.compare:
        b = parse_cnf(args.compare)
        out["compare"] = {"other": str(b), "order": compare(a, b), "sum": str(add(a, b))}
    text = [f"{k}: {v}" for k, v in out.items() if k != "compare"]
    if "compare" in out:
        c = out["compare"]
        text.append(f"compare {a} with {c['other']}: {c['order']}; sum {c['sum']}")
    return out, text


def cmd_vstage(args, d):
    try:
        n = int(args.arg)
    except (TypeError, ValueError):
        raise UsageError("vstage needs a natural number") from None
    if not 0 <= n <= 5:
        raise UsageError("vstage supports 0 <= n <= 5")
    v = v_stage(n)
    out: dict[str, Any] = {"n": n, "count": len(v)}
    text = [f"V_{n} has {len(v)} elements"]
    if n <= 4:
        shown = _ordered(v.elements, lambda x: 0, emit.render)
        out["elements"] = [emit.render(x) for x in shown]
        text += out["elements"]
    return out, text


def cmd_hartogs(args, d):
    if not args.arg and not args.thing:
        raise UsageError("hartogs needs a finite set, e.g. 3 or '{0,{}}'")
    K = _expr(args.arg or args.thing)
    h, l = hartogs(K), lindenbaum(K)
    out = {"set": emit.render(K), "size": len(K), "hartogs": str(h), "lindenbaum": str(l)}
    return out, [f"hartogs: {h}", f"lindenbaum: {l}"]


def cmd_tarski(args, d):
    base = d.famofsets(args.famofsets) if args.famofsets else {}
    b = _budget(args, d, DEFAULT_DEPTH["tarski"])
    u = tarski_universe(base, b)
    out = u.to_json()
    out["depth"] = b.depth
    out["count"] = len(u)
    text = []
    for code in sorted(u.codes, key=lambda c: (u.stage[c], show_code(c))):
        v = u.codes[code]
        shown = emit.render(v) if isinstance(v, HfSet) else json.dumps(v.describe(), sort_keys=True)
        text.append(f"{u.stage[code]}  {show_code(code)} -> {shown}")
    text.append(f"{len(u)} codes, {'stabilized' if u.stabilized else 'not stabilized'}; "
                f"{len(out['truncated'])} infinite decodes kept as handles")
    return out, text


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# -- entry point -------------------------------------------------------------------

def _error_kind(e: Exception) -> str:
    return type(e).__name__


def run(argv: list[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    fmt = "json" if "--format=json" in argv or _after(argv, "--format") == "json" else "text"
    command = next((a for a in argv if a in COMMANDS), None)
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        if fmt == "dot" and args.command != "viz":
            raise UsageError("--format dot is only available for viz")
        d = dsl.Desugarer(_load_doc(args))
        result, text = HANDLERS[args.command](args, d)
    except BudgetExceeded as e:
        return _fail(out, err, fmt, command, e, 2)
    except (BroadgenError, ValueError, RecursionError) as e:
        return _fail(out, err, fmt, command, e, 1)
    if fmt == "json":
        out.write(json.dumps({"command": args.command, "result": result},
                             sort_keys=True, ensure_ascii=False) + "\n")
    elif fmt == "dot" or isinstance(text, str):
        out.write(text if isinstance(text, str) else "\n".join(text) + "\n")
    else:
        out.write("\n".join(text) + "\n")
    return 0


def _after(argv: list[str], flag: str) -> str | None:
    for a, b in zip(argv, argv[1:]):
        if a == flag:
            return b
    return None


def _fail(out, err, fmt: str, command, e: Exception, status: int) -> int:
    if fmt == "json":
        body = {"kind": _error_kind(e), "message": getattr(e, "message", str(e)),
                "line": getattr(e, "line", 0), "col": getattr(e, "col", 0)}
        out.write(json.dumps({"command": command, "error": body}, sort_keys=True) + "\n")
    else:
        err.write(f"broadgen: {_error_kind(e)}: {e}\n")
    return status


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
