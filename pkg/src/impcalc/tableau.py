"""Signed dual tableaux and their Q-transformed counterparts.

In a dual tableau, F(X->Y) (type A) splits the branch into T X | F Y,
while T(X->Y) (type B) extends it with F X and then T Y.  A branch
closes once it holds some formula with both signs.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Sequence, Union

from .derivation import QContext
from .syntax import Formula, Imp, unparse

__all__ = [
    "Sign", "SignedFormula", "Polarity", "QTerm", "Node", "Tableau",
    "TableauError", "expand", "is_closed", "q_transform", "branches",
    "branch_closed", "render_text", "tableau_to_dict",
]


class TableauError(ValueError):
    pass


class Sign(enum.Enum):
    T = "T"
    F = "F"


class Polarity(enum.Enum):
    Q = "Q"      # w -> q
    QQ = "QQ"    # (w -> q) -> q


def _wrap(f: Formula) -> str:
    s = unparse(f)
    return f"({s})" if isinstance(f, Imp) else s


@dataclass(frozen=True, slots=True)
class SignedFormula:
    sign: Sign
    body: Formula

    def conjugate(self) -> "SignedFormula":
        return SignedFormula(Sign.F if self.sign is Sign.T else Sign.T, self.body)

    @property
    def kind(self) -> str | None:
        """'A' for F(X->Y), 'B' for T(X->Y), None for signed atoms."""
        if not isinstance(self.body, Imp):
            return None
        return "A" if self.sign is Sign.F else "B"

    def components(self) -> tuple["SignedFormula", "SignedFormula"]:
        if not isinstance(self.body, Imp):
            raise TableauError("signed atoms have no components")
        x, y = self.body.antecedent, self.body.consequent
        if self.sign is Sign.F:
            return SignedFormula(Sign.T, x), SignedFormula(Sign.F, y)
        return SignedFormula(Sign.F, x), SignedFormula(Sign.T, y)

    def __str__(self) -> str:
        return f"{self.sign.value} {_wrap(self.body)}"


@dataclass(frozen=True, slots=True)
class QTerm:
    polarity: Polarity
    body: Formula

    @classmethod
    def from_signed(cls, sf: SignedFormula) -> "QTerm":
        return cls(Polarity.QQ if sf.sign is Sign.T else Polarity.Q, sf.body)

    def conjugate(self) -> "QTerm":
        return QTerm(Polarity.Q if self.polarity is Polarity.QQ else Polarity.QQ, self.body)

    @property
    def kind(self) -> str | None:
        if not isinstance(self.body, Imp):
            return None
        return "A" if self.polarity is Polarity.Q else "B"

    def components(self) -> tuple["QTerm", "QTerm"]:
        # A: Q(X->Y) gives QQ X | Q Y;  B: QQ(X->Y) gives Q X then QQ Y
        if not isinstance(self.body, Imp):
            raise TableauError("atomic terms have no components")
        x, y = self.body.antecedent, self.body.consequent
        if self.polarity is Polarity.Q:
            return QTerm(Polarity.QQ, x), QTerm(Polarity.Q, y)
        return QTerm(Polarity.Q, x), QTerm(Polarity.QQ, y)

    def realize(self, ctx: QContext) -> Formula:
        return ctx.neg(self.body) if self.polarity is Polarity.Q else ctx.dneg(self.body)

    def __str__(self) -> str:
        return f"{self.polarity.value} {_wrap(self.body)}"


Label = Union[SignedFormula, QTerm]


@dataclass(frozen=True, slots=True)
class Node:
    id: int
    parent: int | None
    label: Label
    source: int | None   # node whose expansion produced this one
    rule: str | None     # "A" or "B"
    slot: int | None     # 0 or 1
    stamp: int


@dataclass(frozen=True)
class Tableau:
    """Immutable tree of nodes; node 0 is the root."""
    nodes: tuple[Node, ...]
    closed_leaves: frozenset[int]

    @property
    def root(self) -> Node:
        return self.nodes[0]

    def children(self, i: int) -> list[Node]:
        return [n for n in self.nodes if n.parent == i]

    def leaves(self) -> list[Node]:
        parents = {n.parent for n in self.nodes}
        return sorted((n for n in self.nodes if n.id not in parents), key=lambda n: n.stamp)

    def path(self, i: int) -> list[Node]:
        """Nodes from the root down to node ``i``."""
        out = []
        cur: int | None = i
        while cur is not None:
            out.append(self.nodes[cur])
            cur = self.nodes[cur].parent
        return out[::-1]

    def depth(self, i: int) -> int:
        return len(self.path(i)) - 1

    def is_closed(self) -> bool:
        return all(n.id in self.closed_leaves for n in self.leaves())


def expand(z: Formula) -> Tableau:
    """Complete dual tableau for T z.

    Each branch works through its unexpanded type A/B nodes first in,
    first out.  A branch stops growing as soon as it closes.
    """
    nodes: list[Node] = []
    closed: set[int] = set()

    def add(label, parent, source=None, rule=None, slot=None) -> int:
        i = len(nodes)
        nodes.append(Node(i, parent, label, source, rule, slot, i))
        return i

    root = SignedFormula(Sign.T, z)
    add(root, None)
    # work items: (leaf id, pending node ids, signed formulas on the branch)
    work = [(0, deque([0] if root.kind else []), {root})]
    while work:
        leaf, pending, seen = work.pop()
        split = None
        while pending and split is None:
            n = pending.popleft()
            label = nodes[n].label
            c0, c1 = label.components()
            if label.kind == "B":
                for slot, c in enumerate((c0, c1)):
                    leaf = add(c, leaf, n, "B", slot)
                    if c.conjugate() in seen:
                        closed.add(leaf)
                        break
                    if c.kind and c not in seen:
                        pending.append(leaf)
                    seen.add(c)
                if leaf in closed:
                    break
            else:
                split = [(add(c, leaf, n, "A", slot), c) for slot, c in enumerate((c0, c1))]
        if split is None:
            continue
        # push slot 1 first so the slot 0 branch is grown first
        for kid, c in reversed(split):
            if c.conjugate() in seen:
                closed.add(kid)
                continue
            queue = deque(pending)
            if c.kind and c not in seen:
                queue.append(kid)
            work.append((kid, queue, seen | {c}))
    return Tableau(tuple(nodes), frozenset(closed))


def is_closed(t: Tableau) -> bool:
    return t.is_closed()


def q_transform(t: Tableau, ctx: QContext) -> Tableau:
    """Replace T W by QQ W and F W by Q W; shape and provenance are kept.

    ``ctx`` only matters when the terms are realized as formulas; it is
    accepted here so callers state which Q they mean.
    """
    if not isinstance(ctx, QContext):
        raise TypeError("ctx must be a QContext")
    if not t.is_closed():
        raise TableauError("only closed tableaux are transformed")
    nodes = tuple(
        Node(n.id, n.parent, QTerm.from_signed(n.label), n.source, n.rule, n.slot, n.stamp)
        for n in t.nodes)
    return Tableau(nodes, t.closed_leaves)


def branches(t: Tableau) -> list[tuple[Label, ...]]:
    """Root-to-leaf label sequences, ordered by leaf stamp."""
    return [tuple(n.label for n in t.path(leaf.id)) for leaf in t.leaves()]


def branch_closed(theta: Sequence[Label]) -> bool:
    seen = set(theta)
    return any(x.conjugate() in seen for x in theta)


def render_text(t: Tableau) -> str:
    out = []
    leaves = {n.id for n in t.leaves()}
    for node in _preorder(t):
        line = "  " * t.depth(node.id) + f"[{node.stamp}] {node.label}"
        if node.rule is not None:
            line += f"   ({node.rule}{node.slot} of [{node.source}])"
        if node.id in leaves:
            line += "   closed" if node.id in t.closed_leaves else "   OPEN"
        out.append(line)
    return "\n".join(out)


def _preorder(t: Tableau) -> list[Node]:
    kids: dict[int, list[Node]] = {}
    for n in t.nodes:
        if n.parent is not None:
            kids.setdefault(n.parent, []).append(n)
    out, stack = [], [t.root]
    while stack:
        n = stack.pop()
        out.append(n)
        stack.extend(reversed(kids.get(n.id, [])))
    return out


def tableau_to_dict(t: Tableau) -> dict:
    leaves = {n.id for n in t.leaves()}
    rows = []
    for n in t.nodes:
        row: dict = {"id": n.id, "parent": n.parent}
        if isinstance(n.label, SignedFormula):
            row["sign"] = n.label.sign.value
        else:
            row["polarity"] = n.label.polarity.value
        row.update(body=unparse(n.label.body), **{"from": n.source},
                   rule=n.rule, slot=n.slot, stamp=n.stamp)
        if n.id in leaves:
            row["closed"] = n.id in t.closed_leaves
        rows.append(row)
    return {"nodes": rows, "closed": t.is_closed()}
