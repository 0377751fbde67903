"""Implicational formulas: construction, parsing, printing and truth tables.

Formulas are hash-consed: building the same tree twice returns the same
object, so ``==`` and ``hash`` are identity-based yet coincide with
structural equality.  Subtrees are shared freely.
"""
from __future__ import annotations

import re
import threading
import weakref
from typing import Iterable, Iterator, Mapping

import numpy as np

__all__ = [
    "Formula", "Var", "Imp", "ParseError", "MissingVariableError",
    "ValuationLimitError", "parse", "unparse", "evaluate", "variables",
    "is_tautology", "falsifying_valuation", "substitute", "implies",
    "formulas_with", "enumerate_formulas", "DEFAULT_MAX_VARS",
]

DEFAULT_MAX_VARS = 24
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")

_lock = threading.Lock()
_vars: dict[str, "Var"] = {}
# (id(antecedent), id(consequent)) -> weak reference to the canonical Imp
_imps: dict[tuple[int, int], weakref.KeyedRef] = {}


def _forget(ref: weakref.KeyedRef) -> None:
    if _imps.get(ref.key) is ref:
        del _imps[ref.key]


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class MissingVariableError(KeyError):
    pass


class ValuationLimitError(RuntimeError):
    """Raised when a truth table would exceed the configured variable cap."""


class Formula:
    __slots__ = ("__weakref__",)

    def __setattr__(self, name, value):
        raise AttributeError("formulas are immutable")

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __str__(self) -> str:
        return unparse(self)


class Var(Formula):
    __slots__ = ("name",)
    name: str

    def __new__(cls, name: str) -> "Var":
        obj = _vars.get(name)
        if obj is not None:
            return obj
        if not isinstance(name, str) or not _IDENT.fullmatch(name):
            raise ValueError(f"bad variable name {name!r}")
        with _lock:
            obj = _vars.get(name)
            if obj is None:
                obj = object.__new__(cls)
                object.__setattr__(obj, "name", name)
                _vars[name] = obj
        return obj

    def __reduce__(self):
        return (Var, (self.name,))

    def __repr__(self) -> str:
        return f"Var({self.name!r})"

    @property
    def size(self) -> int:
        return 0


class Imp(Formula):
    __slots__ = ("antecedent", "consequent", "size")
    antecedent: Formula
    consequent: Formula
    size: int  # number of connectives

    def __new__(cls, antecedent: Formula, consequent: Formula) -> "Imp":
        key = (id(antecedent), id(consequent))
        ref = _imps.get(key)
        if ref is not None:
            obj = ref()
            if obj is not None:
                return obj
        if not (isinstance(antecedent, Formula) and isinstance(consequent, Formula)):
            raise TypeError("Imp takes two formulas")
        with _lock:
            ref = _imps.get(key)
            obj = ref() if ref is not None else None
            if obj is None:
                obj = object.__new__(cls)
                object.__setattr__(obj, "antecedent", antecedent)
                object.__setattr__(obj, "consequent", consequent)
                object.__setattr__(obj, "size", antecedent.size + consequent.size + 1)
                _imps[key] = weakref.KeyedRef(obj, _forget, key)
        return obj

    def __reduce__(self):
        return (Imp, (self.antecedent, self.consequent))

    def __repr__(self) -> str:
        return f"Imp({self.antecedent!r}, {self.consequent!r})"


def implies(*parts: Formula) -> Formula:
    """Right-nested chain: ``implies(a, b, c)`` is a->(b->c)."""
    if not parts:
        raise ValueError("need at least one formula")
    out = parts[-1]
    for f in reversed(parts[:-1]):
        out = Imp(f, out)
    return out


# -- concrete syntax ---------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->|⊃)|([()])|([A-Za-z][A-Za-z0-9_]*))")


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("->", m.group(1), start))
        elif m.group(2):
            out.append((m.group(2), m.group(2), start))
        else:
            out.append(("id", m.group(3), start))
        pos = m.end()
    out.append(("eof", "", n))
    return out


_FAST_TOKEN = re.compile(r"->|⊃|[()]|[A-Za-z][A-Za-z0-9_]*|\S")


def parse(text: str) -> Formula:
    """Parse ``text``; ``->`` (or ``⊃``) associates to the right."""
    # Fast path without positions; any failure is re-parsed slowly for the message.
    spines: list[list[Formula]] = [[]]
    want_atom = True
    for tok in _FAST_TOKEN.findall(text):
        if want_atom:
            if tok == "(":
                spines.append([])
                continue
            v = _vars.get(tok)
            if v is None:
                if not _IDENT.fullmatch(tok):
                    break
                v = Var(tok)
            spines[-1].append(v)
            want_atom = False
        elif tok == "->" or tok == "⊃":
            want_atom = True
        elif tok == ")" and len(spines) > 1:
            spines[-2].append(implies(*spines.pop()))
        else:
            break
    else:
        if not want_atom and len(spines) == 1:
            return implies(*spines[0])
    _parse_with_positions(text)
    raise AssertionError("fast and slow parsers disagree")  # pragma: no cover


def _parse_with_positions(text: str) -> Formula:
    toks = _tokens(text)
    if toks[0][0] == "eof":
        raise ParseError("empty input", 0)
    i = 0

    def formula() -> Formula:
        nonlocal i
        # iterative over the right spine to cope with long chains
        spine = [atom()]
        while toks[i][0] == "->":
            i += 1
            spine.append(atom())
        return implies(*spine)

    def atom() -> Formula:
        nonlocal i
        kind, val, pos = toks[i]
        if kind == "id":
            i += 1
            return Var(val)
        if kind == "(":
            i += 1
            f = formula()
            if toks[i][0] != ")":
                raise ParseError("expected ')'", toks[i][2])
            i += 1
            return f
        what = "end of input" if kind == "eof" else repr(val)
        raise ParseError(f"unexpected {what}", pos)

    f = formula()
    if toks[i][0] != "eof":
        raise ParseError(f"unexpected {toks[i][1]!r}", toks[i][2])
    return f


def unparse(f: Formula, memo: "dict[Formula, str] | None" = None) -> str:
    """Render with the fewest parentheses; ``parse(unparse(f)) is f``.

    Pass the same ``memo`` dict to many calls to reuse the text of shared
    subformulas; proofs repeat large subformulas across lines.
    """
    if memo is None:
        memo = {}
    stack = [f]
    while stack:
        g = stack[-1]
        if g in memo:
            stack.pop()
        elif isinstance(g, Var):
            memo[g] = g.name
        elif g.antecedent in memo and g.consequent in memo:
            a = memo[g.antecedent]
            if isinstance(g.antecedent, Imp):
                a = f"({a})"
            memo[g] = f"{a}->{memo[g.consequent]}"
        else:
            stack.append(g.consequent)
            stack.append(g.antecedent)
    return memo[f]


# -- semantics ---------------------------------------------------------------

def _postorder(f: Formula) -> list[Formula]:
    """Distinct subformulas, children before parents."""
    seen: set[int] = set()
    order: list[Formula] = []
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        g, done = stack.pop()
        if done:
            order.append(g)
            continue
        if id(g) in seen:
            continue
        seen.add(id(g))
        stack.append((g, True))
        if isinstance(g, Imp):
            stack.append((g.consequent, False))
            stack.append((g.antecedent, False))
    return order


def variables(f: Formula) -> list[str]:
    """Variable names in order of first occurrence, left to right."""
    out: dict[str, None] = {}
    seen: set[int] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        if isinstance(g, Var):
            out.setdefault(g.name)
        else:
            stack.append(g.consequent)
            stack.append(g.antecedent)
    return list(out)


def evaluate(f: Formula, valuation: Mapping[str, bool]) -> bool:
    values: dict[int, bool] = {}
    for g in _postorder(f):
        if isinstance(g, Var):
            try:
                values[id(g)] = bool(valuation[g.name])
            except KeyError:
                raise MissingVariableError(g.name) from None
        else:
            values[id(g)] = (not values[id(g.antecedent)]) or values[id(g.consequent)]
    return values[id(f)]


def _table(f: Formula, names: list[str], start: int, stop: int) -> np.ndarray:
    rows = np.arange(start, stop, dtype=np.int64)
    k = len(names)
    cols = {name: ((rows >> (k - 1 - i)) & 1).astype(bool) for i, name in enumerate(names)}
    values: dict[int, np.ndarray] = {}
    for g in _postorder(f):
        if isinstance(g, Var):
            values[id(g)] = cols[g.name]
        else:
            values[id(g)] = ~values[id(g.antecedent)] | values[id(g.consequent)]
    return values[id(f)]


def falsifying_valuation(f: Formula, max_vars: int = DEFAULT_MAX_VARS) -> dict[str, bool] | None:
    """First falsifying row of the truth table (all-false row first), or None."""
    names = variables(f)
    k = len(names)
    if k > max_vars:
        raise ValuationLimitError(f"{k} variables exceeds the cap of {max_vars}")
    total = 1 << k
    chunk = 1 << 16
    for start in range(0, total, chunk):
        col = _table(f, names, start, min(total, start + chunk))
        bad = np.flatnonzero(~col)
        if bad.size:
            row = start + int(bad[0])
            return {name: bool((row >> (k - 1 - i)) & 1) for i, name in enumerate(names)}
    return None


def is_tautology(f: Formula, max_vars: int = DEFAULT_MAX_VARS) -> bool:
    return falsifying_valuation(f, max_vars) is None


def substitute(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Replace variables by formulas simultaneously."""
    out: dict[int, Formula] = {}
    for g in _postorder(f):
        if isinstance(g, Var):
            out[id(g)] = mapping.get(g.name, g)
        else:
            out[id(g)] = Imp(out[id(g.antecedent)], out[id(g.consequent)])
    return out[id(f)]


# -- enumeration -------------------------------------------------------------

def formulas_with(names: Iterable[str], connectives: int) -> Iterator[Formula]:
    """Every formula over ``names`` with exactly ``connectives`` arrows."""
    atoms = [Var(n) for n in names]
    memo: dict[int, list[Formula]] = {0: atoms}

    def build(n: int) -> list[Formula]:
        if n not in memo:
            memo[n] = [Imp(a, c)
                       for left in range(n)
                       for a in build(left)
                       for c in build(n - 1 - left)]
        return memo[n]

    yield from build(connectives)


def enumerate_formulas(max_vars: int, max_connectives: int,
                       names: str = "pqrstuvw") -> list[Formula]:
    """All formulas within the bounds, by connective count then printed form."""
    if max_vars < 1:
        raise ValueError("need at least one variable")
    if max_vars > len(names):
        raise ValueError(f"at most {len(names)} variables available")
    pool = list(names[:max_vars])
    out: list[Formula] = []
    for n in range(max_connectives + 1):
        out.extend(sorted(formulas_with(pool, n), key=unparse))
    return out

