"""Hash-consed hereditarily finite sets.

Every set is interned in a single append-only store, so extensional equality
coincides with object identity. Elements are kept in a canonical total order:
by rank first, then lexicographically on the (canonically ordered) element
sequences.

The kernel is pure, so the element set of a thing is the thing itself;
``element_set`` is provided only as a documented alias.
"""
from __future__ import annotations

import threading
from operator import attrgetter
from typing import Callable, Iterable, Iterator

from .errors import BudgetExceeded, HfParseError

_by_id = attrgetter("id")


class HfSet:
    """An interned hereditarily finite set. Never construct directly; use intern."""

    __slots__ = ("_raw", "id", "rank", "_elements", "_key", "_members")

    def __init__(self, raw: tuple, ident: int, rank: int):
        self._raw = raw  # elements sorted by id; the interning key
        self.id = ident
        self.rank = rank
        self._elements = None
        self._key = None
        self._members = None

    @property
    def elements(self) -> tuple:
        """Elements in canonical order."""
        els = self._elements
        if els is None:
            if len(self._raw) < 2:
                els = self._raw
            else:
                for e in self._raw:
                    _ensure_key(e)
                els = tuple(sorted(self._raw, key=attrgetter("_key")))
            self._elements = els
        return els

    @property
    def key(self) -> tuple:
        """Sort key realizing the canonical order."""
        _ensure_key(self)
        return self._key

    def __iter__(self) -> Iterator["HfSet"]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self._raw)

    def __contains__(self, x) -> bool:
        raw = self._raw
        if len(raw) <= 8:
            for e in raw:
                if e is x:
                    return True
            return False
        m = self._members
        if m is None:
            m = self._members = frozenset(raw)
        return x in m

    def __repr__(self) -> str:
        try:
            return f"HfSet({serialize(self, max_chars=200)})"
        except BudgetExceeded:
            return f"HfSet(#{self.id}, rank={self.rank}, size={len(self._raw)})"

    def __reduce__(self):
        return (parse, (serialize(self),))


def _ensure_key(x: HfSet) -> None:
    if x._key is not None:
        return
    stack = [x]
    while stack:
        top = stack[-1]
        if top._key is not None:
            stack.pop()
            continue
        missing = [e for e in top._raw if e._key is None]
        if missing:
            stack.extend(missing)
            continue
        stack.pop()
        top._key = (top.rank, tuple(e._key for e in top.elements))


class CanonicalStore:
    """Append-only interning table. Lookups are lock-free, inserts are locked."""

    def __init__(self, max_nodes: int | None = 50_000_000):
        self.max_nodes = max_nodes
        self._table: dict[tuple, HfSet] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._table)

    def intern_raw(self, raw: tuple) -> HfSet:
        # raw must be duplicate-free and sorted by id
        hit = self._table.get(raw)
        if hit is not None:
            return hit
        with self._lock:
            hit = self._table.get(raw)
            if hit is not None:
                return hit
            if self.max_nodes is not None and len(self._table) >= self.max_nodes:
                raise BudgetExceeded(f"set store is full ({self.max_nodes} nodes)")
            rank = 1 + max(e.rank for e in raw) if raw else 0
            node = HfSet(raw, len(self._table), rank)
            self._table[raw] = node
            return node


STORE = CanonicalStore()


def set_node_budget(max_nodes: int | None) -> None:
    STORE.max_nodes = max_nodes


def intern(elements: Iterable[HfSet] = ()) -> HfSet:
    """The canonical set whose elements are the given ones."""
    if isinstance(elements, HfSet):
        return elements
    uniq = {id(e): e for e in elements}
    for e in uniq.values():
        if not isinstance(e, HfSet):
            raise TypeError(f"not an HfSet: {e!r}")
    raw = tuple(sorted(uniq.values(), key=_by_id))
    return STORE.intern_raw(raw)


def hf(*elements: HfSet) -> HfSet:
    return intern(elements)


EMPTY = STORE.intern_raw(())
ONE = STORE.intern_raw((EMPTY,))

# truth values are the subsets of 1
FALSE = EMPTY
TRUE = ONE


def truth(b: bool) -> HfSet:
    return TRUE if b else FALSE


def element_set(x: HfSet) -> HfSet:
    """Alias: in a pure universe every thing is its own element set."""
    return x


def singleton(x: HfSet) -> HfSet:
    return STORE.intern_raw((x,))


def upair(x: HfSet, y: HfSet) -> HfSet:
    if x is y:
        return singleton(x)
    return STORE.intern_raw((x, y) if x.id < y.id else (y, x))


def union(*sets: HfSet) -> HfSet:
    return intern(e for s in sets for e in s._raw)


def union_of(a: HfSet) -> HfSet:
    return intern(e for s in a._raw for e in s._raw)


def intersection(a: HfSet, b: HfSet) -> HfSet:
    return STORE.intern_raw(tuple(e for e in a._raw if e in b))


def difference(a: HfSet, b: HfSet) -> HfSet:
    return STORE.intern_raw(tuple(e for e in a._raw if e not in b))


def separate(a: HfSet, pred: Callable[[HfSet], bool]) -> HfSet:
    return STORE.intern_raw(tuple(e for e in a._raw if pred(e)))


def replace(a: HfSet, f: Callable[[HfSet], HfSet]) -> HfSet:
    return intern(f(e) for e in a._raw)


def is_subset(a: HfSet, b: HfSet) -> bool:
    return all(e in b for e in a._raw)


def is_transitive(a: HfSet) -> bool:
    return all(is_subset(e, a) for e in a._raw)


def powerset(a: HfSet, max_size: int = 20) -> HfSet:
    n = len(a._raw)
    if n > max_size:
        raise BudgetExceeded(f"powerset of a {n}-element set exceeds the limit of {max_size}")
    raw = a._raw
    subsets = []
    for mask in range(1 << n):
        # subsequences of an id-sorted tuple stay id-sorted
        sub = tuple(raw[j] for j in range(n) if mask >> j & 1)
        subsets.append(STORE.intern_raw(sub))
    return intern(subsets)


def descendant_set(e: HfSet) -> HfSet:
    """Least transitive set containing e as an element."""
    seen = {id(e): e}
    todo = [e]
    while todo:
        x = todo.pop()
        for y in x._raw:
            if id(y) not in seen:
                seen[id(y)] = y
                todo.append(y)
    return intern(seen.values())


def transitive_closure(a: HfSet) -> HfSet:
    """Least transitive superset of a."""
    seen: dict[int, HfSet] = {}
    todo = list(a._raw)
    while todo:
        x = todo.pop()
        if id(x) not in seen:
            seen[id(x)] = x
            todo.extend(x._raw)
    return intern(seen.values())


def strict_descendants(e: HfSet) -> HfSet:
    """Descendants of e other than e itself (well-foundedness keeps e out)."""
    return transitive_closure(e)


def rank(x: HfSet) -> int:
    return x.rank


def canonical_lt(a: HfSet, b: HfSet) -> bool:
    return a is not b and a.key < b.key


# -- serialization -------------------------------------------------------------

def _text_lengths(x: HfSet, memo: dict) -> int:
    stack = [x]
    while stack:
        top = stack.pop()
        if id(top) in memo:
            continue
        pending = [e for e in top._raw if id(e) not in memo]
        if pending:
            stack.append(top)
            stack.extend(pending)
            continue
        n = len(top._raw)
        memo[id(top)] = 2 + sum(memo[id(e)] for e in top._raw) + max(n - 1, 0)
    return memo[id(x)]


def serialize(x: HfSet, max_chars: int = 10_000_000) -> str:
    """Canonical braces text, no whitespace."""
    size = _text_lengths(x, {})
    if size > max_chars:
        raise BudgetExceeded(f"serialization would take {size} characters")
    out: dict[int, str] = {}
    stack = [x]
    while stack:
        top = stack[-1]
        if id(top) in out:
            stack.pop()
            continue
        pending = [e for e in top._raw if id(e) not in out]
        if pending:
            stack.extend(pending)
            continue
        stack.pop()
        out[id(top)] = "{" + ",".join(out[id(e)] for e in top.elements) + "}"
    return out[id(x)]


def parse(text: str) -> HfSet:
    """Parse braces text; whitespace is allowed between tokens."""
    stack: list[list[HfSet]] = []
    result = None
    expect_item = False  # just saw '{' or ','
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if result is not None:
            raise HfParseError("trailing input", i)
        if c == "{":
            if stack and not expect_item:
                raise HfParseError("expected ',' or '}'", i)
            stack.append([])
            expect_item = True
        elif c == "}":
            if not stack:
                raise HfParseError("unbalanced '}'", i)
            if expect_item and stack[-1]:
                raise HfParseError("expected a set after ','", i)
            node = intern(stack.pop())
            if stack:
                stack[-1].append(node)
                expect_item = False
            else:
                result = node
        elif c == ",":
            if not stack or expect_item:
                raise HfParseError("unexpected ','", i)
            expect_item = True
        else:
            raise HfParseError(f"unexpected character {c!r}", i)
        i += 1
    if stack:
        raise HfParseError("unterminated set", n)
    if result is None:
        raise HfParseError("empty input", n)
    return result
