"""Turning closed tableaux into Hilbert proofs.

Each closed branch of the Q-tableau yields a proof of the disjunction of
its realized terms.  Undoing the expansions one node at a time (rule A
merges the two alternatives of a split, rule B drops one direct
consequence) carries these proofs back up to the root QQ Z.  With Q := Z
that is (Z->Z)->Z, one modus ponens away from Z.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import kernel
from .derivation import (DerivationError, ProofBuilder, QContext, disj,
                         disj_many, emit_commute, emit_disj_map, emit_hs,
                         emit_id, emit_intro, emit_qq_distribute, emit_robbin)
from .kernel import Proof, Scheme
from .syntax import DEFAULT_MAX_VARS, Formula, Imp, falsifying_valuation, unparse
from .tableau import Polarity, QTerm, Tableau, branch_closed, expand, q_transform

__all__ = [
    "NotATautology", "d_of", "axiom_proof", "rule_a", "rule_b", "prune",
    "complete", "synthesize", "Synthesis",
]


class NotATautology(ValueError):
    def __init__(self, formula: Formula, valuation: dict[str, bool]):
        shown = " ".join(f"{k}={'true' if v else 'false'}" for k, v in valuation.items())
        super().__init__(f"{unparse(formula)} is not a tautology: false under {shown}")
        self.formula = formula
        self.valuation = valuation


def d_of(theta: Sequence[QTerm], ctx: QContext) -> Formula:
    if not theta:
        raise DerivationError("empty branch")
    return disj_many([t.realize(ctx) for t in theta])


def _conjugate_pair(theta: Sequence[QTerm]) -> tuple[int, int]:
    first: dict[QTerm, int] = {}
    for k, t in enumerate(theta):
        first.setdefault(t, k)
    for k, t in enumerate(theta):
        if t.polarity is Polarity.Q and t.conjugate() in first:
            return k, first[t.conjugate()]
    raise DerivationError("branch is not closed")


def _emit_axiom(b: ProofBuilder, theta: Sequence[QTerm], ctx: QContext) -> int:
    i, j = _conjugate_pair(theta)
    w = theta[i].body
    zs = [t.realize(ctx) for t in theta]
    d = disj_many(zs)
    via_q = emit_intro(b, i, zs)                # Q W -> D
    via_qq = emit_intro(b, j, zs)               # QQ W -> D
    r8 = emit_robbin(b, 8, ctx, w, d)           # (QW->D)->(QQW->D)->QQD
    qqd = b.mp(b.mp(r8, via_q), via_qq)
    spread = emit_qq_distribute(b, ctx, zs)     # QQ D -> QQz_0 v ... v QQz_N
    # QQ z -> z for every term, each an instance of QQQA -> QA
    backs = [emit_robbin(b, 4, ctx, t.body if t.polarity is Polarity.Q else ctx.neg(t.body))
             for t in theta]
    back = emit_disj_map(b, [ctx.dneg(z) for z in zs], zs, backs)
    return b.mp(back, b.mp(spread, qqd))


def _term(theta: Sequence[QTerm], index: int, polarity: Polarity) -> tuple[Formula, Formula]:
    if not 0 <= index < len(theta):
        raise DerivationError(f"no term {index} in a branch of length {len(theta)}")
    t = theta[index]
    if t.polarity is not polarity or not isinstance(t.body, Imp):
        raise DerivationError(f"term {index} ({t}) is not of the form {polarity.value}(X->Y)")
    return t.body.antecedent, t.body.consequent


def _expect(b: ProofBuilder, line: int, f: Formula, what: str) -> None:
    if b.formula(line) is not f:
        raise DerivationError(f"{what}: expected a proof of {unparse(f)}, "
                              f"got {unparse(b.formula(line))}")


def _emit_rule_a(b: ProofBuilder, theta: Sequence[QTerm], index: int,
                 line0: int, line1: int, ctx: QContext) -> int:
    x, y = _term(theta, index, Polarity.Q)
    zs = [t.realize(ctx) for t in theta]
    d = disj_many(zs)
    alpha, alpha0, alpha1 = zs[index], ctx.dneg(x), ctx.neg(y)
    _expect(b, line0, disj(d, alpha0), "rule A")
    _expect(b, line1, disj(d, alpha1), "rule A")
    emit_intro(b, index, zs)                              # alpha -> D
    s = b.sketch([alpha0, alpha1])
    got = s.mp(s.mp(emit_robbin(s, 6, ctx, x, y), alpha0), alpha1)
    s.mp(Imp(alpha, d), got)
    s.discharge(alpha1, alpha0)
    both = s.commit()                                     # alpha0 -> alpha1 -> D
    c1 = b.mp(emit_commute(b, d, alpha1), line1)          # (alpha1 -> D) -> D
    only0 = emit_hs(b, both, c1)                          # alpha0 -> D
    c0 = b.mp(emit_commute(b, d, alpha0), line0)          # (alpha0 -> D) -> D
    return b.mp(c0, only0)


def _emit_rule_b(b: ProofBuilder, theta: Sequence[QTerm], index: int, slot: int,
                 line: int, ctx: QContext) -> int:
    x, y = _term(theta, index, Polarity.QQ)
    zs = [t.realize(ctx) for t in theta]
    d = disj_many(zs)
    if slot == 0:
        part = ctx.neg(x)
        up = emit_robbin(b, 7, ctx, x, y)                 # QX -> QQ(X->Y)
    elif slot == 1:
        part = ctx.dneg(y)
        up = emit_robbin(b, 5, ctx, x, y)                 # QQY -> QQ(X->Y)
    else:
        raise DerivationError(f"slot must be 0 or 1, not {slot!r}")
    _expect(b, line, disj(d, part), "rule B")
    part_d = emit_hs(b, up, emit_intro(b, index, zs))     # part -> D
    c = b.mp(emit_commute(b, d, part), line)              # (part -> D) -> D
    return b.mp(c, part_d)


def _closed_input(p: Proof, b: ProofBuilder) -> int:
    if p.hypotheses:
        raise DerivationError("expected a proof without hypotheses")
    return b.embed(p)


def axiom_proof(theta: Sequence[QTerm], ctx: QContext) -> Proof:
    """Closed proof of d_of(theta) for a branch holding some Q W and QQ W."""
    b = ProofBuilder()
    return b.proof(_emit_axiom(b, theta, ctx))


def rule_a(theta: Sequence[QTerm], index: int, p0: Proof, p1: Proof, ctx: QContext) -> Proof:
    """From |- D v QQX and |- D v QY, where theta[index] is Q(X->Y), get |- D."""
    b = ProofBuilder()
    l0, l1 = _closed_input(p0, b), _closed_input(p1, b)
    return b.proof(_emit_rule_a(b, theta, index, l0, l1, ctx))


def rule_b(theta: Sequence[QTerm], index: int, slot: int, p: Proof, ctx: QContext) -> Proof:
    """From |- D v QX (slot 0) or |- D v QQY (slot 1), where theta[index] is QQ(X->Y), get |- D."""
    b = ProofBuilder()
    return b.proof(_emit_rule_b(b, theta, index, slot, _closed_input(p, b), ctx))


@dataclass
class PruneStats:
    leaves: int = 0
    rule_a: int = 0
    rule_b: int = 0
    removed: int = 0


def _prune_into(b: ProofBuilder, qt: Tableau, ctx: QContext, stats: PruneStats,
                audit: Callable[[tuple[QTerm, ...], Proof], None] | None = None) -> int:
    labels = {n.id: tuple(m.label for m in qt.path(n.id)) for n in qt.nodes}
    held: dict[int, int] = {}     # current leaf id -> line proving its branch disjunction

    def record(node_id: int, line: int) -> None:
        held[node_id] = line
        if audit is not None:
            audit(labels[node_id], b.proof(line))

    for leaf in qt.leaves():
        theta = labels[leaf.id]
        if not branch_closed(theta):
            raise DerivationError(f"branch ending at node {leaf.id} is open")
        record(leaf.id, _emit_axiom(b, theta, ctx))
        stats.leaves += 1

    gone: set[int] = set()
    for node in sorted(qt.nodes[1:], key=lambda n: n.stamp, reverse=True):
        if node.id in gone:
            continue
        parent = node.parent
        theta = labels[parent]
        index = qt.depth(node.source)
        if node.rule == "B":
            line = _emit_rule_b(b, theta, index, node.slot, held.pop(node.id), ctx)
            gone.add(node.id)
            stats.rule_b += 1
            stats.removed += 1
        else:
            sibling = next(n for n in qt.children(parent) if n.id != node.id)
            if node.slot != 1 or sibling.id not in held:
                raise DerivationError("tableau stamps are not in construction order")
            line = _emit_rule_a(b, theta, index, held.pop(sibling.id), held.pop(node.id), ctx)
            gone.update((node.id, sibling.id))
            stats.rule_a += 1
            stats.removed += 2
        record(parent, line)
    return held[0]


def prune(qt: Tableau, ctx: QContext,
          audit: Callable[[tuple[QTerm, ...], Proof], None] | None = None) -> Proof:
    """Closed proof of QQ Z from a closed Q-tableau rooted at QQ Z.

    Nodes are removed in decreasing stamp order.  ``audit`` is called with
    every branch and the proof currently held for it.
    """
    b = ProofBuilder()
    return b.proof(_prune_into(b, qt, ctx, PruneStats(), audit))


@dataclass
class Synthesis:
    formula: Formula
    q: Formula
    tableau: Tableau
    proof: Proof
    final_step: str | None
    prune_stats: PruneStats = field(default_factory=PruneStats)
    dt_in: int = 0
    dt_out: int = 0

    def report(self) -> dict:
        return {
            "formula": unparse(self.formula),
            "q": unparse(self.q),
            "conclusion": unparse(self.proof.conclusion),
            "final_step": self.final_step,
            "tableau_nodes": len(self.tableau.nodes),
            "tableau_branches": len(self.tableau.leaves()),
            "prune_rule_a": self.prune_stats.rule_a,
            "prune_rule_b": self.prune_stats.rule_b,
            "prune_removed": self.prune_stats.removed,
            "proof_lines": len(self.proof),
            "schemes": sorted(s.value for s in kernel.used_schemes(self.proof)),
            "dt_expansion": round(self.dt_out / self.dt_in, 3) if self.dt_in else None,
        }


def synthesize(z: Formula, q: Formula | None = None, final_step: str | None = "id",
               max_vars: int = DEFAULT_MAX_VARS) -> Synthesis:
    """Run the whole pipeline for a tautology ``z``.

    With ``q`` left as None, Q := z and ``final_step`` ("id" or "peirce")
    turns |- (z->z)->z into |- z.  Given an explicit ``q`` the result is the
    proof of QQ z itself and ``final_step`` is ignored.
    """
    bad = falsifying_valuation(z, max_vars)
    if bad is not None:
        raise NotATautology(z, bad)
    t = expand(z)
    if not t.is_closed():
        raise DerivationError(f"tableau for {unparse(z)} has an open branch")
    closing = q is None
    ctx = QContext(z if closing else q)
    b = ProofBuilder()
    stats = PruneStats()
    top = _prune_into(b, q_transform(t, ctx), ctx, stats)
    if closing:
        if final_step == "id":
            top = b.mp(top, emit_id(b, z))
        elif final_step == "peirce":
            top = b.mp(b.axiom(Scheme.PEIRCE, z, z), top)
        else:
            raise ValueError(f"final_step must be 'id' or 'peirce', not {final_step!r}")
    return Synthesis(z, ctx.q, t, b.proof(top), final_step if closing else None,
                     stats, b.dt_in, b.dt_out)


def complete(z: Formula, final_step: str = "id") -> Proof:
    """Closed proof of the tautology ``z`` from the three schemes."""
    return synthesize(z, final_step=final_step).proof
