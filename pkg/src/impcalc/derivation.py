"""Derived proof constructors on top of the kernel.

Everything here returns (or emits) ordinary kernel proofs; nothing is
trusted.  Construction goes through :class:`ProofBuilder`, which keeps one
line per distinct formula, so a lemma needed twice in a proof is proved
once.

Lemmas are written as small *sketches*: a deduction from assumptions in
which other lemmas appear as extra hypotheses.  Discharging the
assumptions with the deduction theorem then only rewrites the sketch, and
the lemma proofs are spliced in afterwards from the enclosing builder.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .kernel import MP, Axiom, Hyp, Line, Proof, Scheme, instantiate
from .syntax import Formula, Imp, implies, unparse

__all__ = [
    "DerivationError", "QContext", "ProofBuilder", "prove_id",
    "deduction_theorem", "hs", "robbin", "robbin_statement", "disj",
    "disj_many", "disj_intro", "disj_elim", "disj_map", "disj_commute",
    "qq_distribute", "emit_id", "emit_hs", "emit_robbin", "emit_intro",
    "emit_elim", "emit_disj_map", "emit_commute", "emit_qq_distribute",
]


class DerivationError(ValueError):
    pass


@dataclass(frozen=True)
class QContext:
    """A fixed formula ``q``; ``neg(w)`` is w->q and ``dneg(w)`` is (w->q)->q."""
    q: Formula

    def neg(self, w: Formula) -> Formula:
        return Imp(w, self.q)

    def dneg(self, w: Formula) -> Formula:
        return Imp(Imp(w, self.q), self.q)


class ProofBuilder:
    """Mutable workspace that freezes into a :class:`Proof`.

    Lines are addressed by index or by formula.  A builder created with
    :meth:`sketch` may use any formula its parent already proves; such
    formulas become hypotheses of the sketch and are matched back up when
    the sketch is committed.
    """

    def __init__(self, hypotheses: Sequence[Formula] = (), outer: "ProofBuilder | None" = None):
        self.hyps: list[Formula] = list(hypotheses)
        self.lines: list[Line] = []
        self.where: dict[Formula, int] = {}
        self.outer = outer
        self.cursor = -1   # most recently produced line
        # deduction-theorem bookkeeping: lines in, lines out
        self.dt_in = 0
        self.dt_out = 0

    # -- primitive emission --

    def _emit(self, f: Formula, just) -> int:
        i = self.where.get(f)
        if i is None:
            i = len(self.lines)
            self.lines.append(Line(f, just))
            self.where[f] = i
        self.cursor = i
        return i

    def formula(self, i: int) -> Formula:
        return self.lines[i].formula

    def knows(self, f: Formula) -> bool:
        return f in self.where or f in self.hyps or (
            self.outer is not None and self.outer.knows(f))

    def assume(self, f: Formula) -> int:
        if f not in self.hyps:
            self.hyps.append(f)
        return self._emit(f, Hyp(self.hyps.index(f)))

    def get(self, f: Formula) -> int:
        i = self.where.get(f)
        if i is not None:
            self.cursor = i
            return i
        if f in self.hyps:
            return self._emit(f, Hyp(self.hyps.index(f)))
        if self.outer is not None and self.outer.knows(f):
            return self.assume(f)
        raise DerivationError(f"{unparse(f)} is not available here")

    def _ix(self, x: "int | Formula") -> int:
        return x if isinstance(x, int) else self.get(x)

    def axiom(self, scheme: Scheme, *subst: Formula) -> int:
        return self._emit(instantiate(scheme, subst), Axiom(scheme, tuple(subst)))

    def mp(self, major: "int | Formula", minor: "int | Formula") -> int:
        i, j = self._ix(major), self._ix(minor)
        f, a = self.lines[i].formula, self.lines[j].formula
        if not (isinstance(f, Imp) and f.antecedent is a):
            raise DerivationError(f"cannot apply {unparse(f)} to {unparse(a)}")
        return self._emit(f.consequent, MP(i, j))

    def embed(self, proof: Proof) -> int:
        """Copy ``proof`` in; its hypotheses must be available here."""
        remap: list[int] = []
        for ln in proof.lines:
            j = ln.just
            if isinstance(j, Hyp):
                k = self.get(proof.hypotheses[j.index])
            elif isinstance(j, MP):
                k = self._emit(ln.formula, MP(remap[j.major], remap[j.minor]))
            else:
                k = self._emit(ln.formula, j)
            remap.append(k)
        self.cursor = remap[-1]
        return remap[-1]

    def lemma(self, statement: Formula, make: Callable[["ProofBuilder"], int]) -> int:
        """Line proving the closed theorem ``statement``, built by ``make`` if absent.

        Inside a sketch the lemma is built in the enclosing builder and
        only assumed here.
        """
        i = self.where.get(statement)
        if i is not None:
            self.cursor = i
            return i
        if self.outer is not None:
            self.outer.lemma(statement, make)
            return self.assume(statement)
        i = make(self)
        self.cursor = i
        if self.lines[i].formula is not statement:
            raise AssertionError(f"lemma proved {unparse(self.lines[i].formula)}, "
                                 f"expected {unparse(statement)}")
        return i

    # -- sketches --

    def sketch(self, assumptions: Sequence[Formula]) -> "ProofBuilder":
        return ProofBuilder(assumptions, outer=self)

    def _root(self) -> "ProofBuilder":
        b = self
        while b.outer is not None:
            b = b.outer
        return b

    def discharge(self, *assumptions: Formula) -> int:
        """Apply the deduction theorem to the current line, once per assumption."""
        p = self.proof(self.cursor)
        root = self._root()
        for a in assumptions:
            n = len(p)
            p = _discharge(p, a)
            root.dt_in += n
            root.dt_out += len(p)
        self.hyps = list(p.hypotheses)
        self.lines = list(p.lines)
        self.where = {}
        for i, ln in enumerate(self.lines):
            self.where.setdefault(ln.formula, i)
        self.cursor = len(self.lines) - 1
        return self.cursor

    def commit(self) -> int:
        """Copy the current line's proof into the enclosing builder."""
        return self.outer.embed(self.proof(self.cursor))

    def proof(self, last: int | None = None) -> Proof:
        """Freeze the lines that line ``last`` (default: the final line) depends on.

        Every line of the result except the conclusion is cited later on,
        and the hypothesis list is kept whole.
        """
        return _tight(tuple(self.hyps), self.lines, len(self.lines) - 1 if last is None else last)


def _tight(hyps: tuple[Formula, ...], lines: Sequence[Line], last: int) -> Proof:
    needed = [False] * (last + 1)
    needed[last] = True
    for i in range(last, -1, -1):
        if needed[i]:
            j = lines[i].just
            if isinstance(j, MP):
                needed[j.major] = needed[j.minor] = True
    renumber: dict[int, int] = {}
    out: list[Line] = []
    for i in range(last + 1):
        if needed[i]:
            ln = lines[i]
            if isinstance(ln.just, MP):
                ln = Line(ln.formula, MP(renumber[ln.just.major], renumber[ln.just.minor]))
            renumber[i] = len(out)
            out.append(ln)
    return Proof(hyps, tuple(out))


# -- identity and the deduction theorem ------------------------------------

def emit_id(b: ProofBuilder, a: Formula) -> int:
    def make(b: ProofBuilder) -> int:
        aa = Imp(a, a)
        k1 = b.axiom(Scheme.K, a, aa)          # a->(a->a)->a
        s = b.axiom(Scheme.S, a, aa, a)        # (a->(a->a)->a)->(a->a->a)->a->a
        k2 = b.axiom(Scheme.K, a, a)           # a->a->a
        return b.mp(b.mp(s, k1), k2)
    return b.lemma(Imp(a, a), make)


def prove_id(a: Formula) -> Proof:
    """The five-line K/S proof of a->a."""
    b = ProofBuilder()
    return b.proof(emit_id(b, a))


def deduction_theorem(d: Proof, a: Formula) -> Proof:
    """Turn a deduction of B from Γ and ``a`` into one of a->B from Γ.

    Line by line: axioms and other hypotheses are weakened with K, the
    hypothesis ``a`` becomes a->a, and modus ponens goes through S.
    Every copy of ``a`` is removed from the hypothesis list.
    """
    if a not in d.hypotheses:
        raise DerivationError(f"{unparse(a)} is not a hypothesis of the deduction")
    gamma = [h for h in d.hypotheses if h is not a]
    b = ProofBuilder(gamma)
    lifted: list[int] = []
    for ln in d.lines:
        f, j = ln.formula, ln.just
        if isinstance(j, Hyp) and d.hypotheses[j.index] is a:
            lifted.append(emit_id(b, a))
        elif isinstance(j, MP):
            minor = d.lines[j.minor].formula
            s = b.axiom(Scheme.S, a, minor, f)
            lifted.append(b.mp(b.mp(s, lifted[j.major]), lifted[j.minor]))
        else:
            own = b.get(f) if isinstance(j, Hyp) else b._emit(f, j)
            lifted.append(b.mp(b.axiom(Scheme.K, f, a), own))
    return b.proof(lifted[-1])


def _discharge(p: Proof, a: Formula) -> Proof:
    # an assumption that already vanished (it coincided with an earlier one) is
    # discharged by weakening the conclusion
    if a in p.hypotheses:
        return deduction_theorem(p, a)
    b = ProofBuilder(p.hypotheses)
    c = b.embed(p)
    return b.proof(b.mp(b.axiom(Scheme.K, p.conclusion, a), c))


def _split(f: Formula, what: str) -> tuple[Formula, Formula]:
    if not isinstance(f, Imp):
        raise DerivationError(f"{what}: expected an implication, got {unparse(f)}")
    return f.antecedent, f.consequent


def emit_hs(b: ProofBuilder, first: int, second: int) -> int:
    """From lines X->Y and Y->Z, a line X->Z."""
    x, y = _split(b.formula(first), "hs")
    y2, z = _split(b.formula(second), "hs")
    if y is not y2:
        raise DerivationError("hs: middle formulas differ")
    s = b.sketch([x])
    s.mp(Imp(y, z), s.mp(Imp(x, y), x))
    s.discharge(x)
    return s.commit()


def _union(*hyp_lists: Sequence[Formula]) -> list[Formula]:
    out: list[Formula] = []
    for hs_ in hyp_lists:
        for h in hs_:
            if h not in out:
                out.append(h)
    return out


def hs(p1: Proof, p2: Proof) -> Proof:
    """Hypothetical syllogism: proofs of A->B and B->C give A->C.

    The result's hypotheses are the union of both inputs'.
    """
    b = ProofBuilder(_union(p1.hypotheses, p2.hypotheses))
    i1, i2 = b.embed(p1), b.embed(p2)
    return b.proof(emit_hs(b, i1, i2))


# -- the eight schemes -----------------------------------------------------

_ARITY = {1: 3, 2: 2, 3: 1, 4: 1, 5: 2, 6: 2, 7: 2, 8: 2}


def robbin_statement(n: int, ctx: QContext | None, *params: Formula) -> Formula:
    """The formula asserted by part ``n`` for the given parameters."""
    if n not in _ARITY:
        raise DerivationError(f"no part {n}; parts run from 1 to 8")
    if len(params) != _ARITY[n]:
        raise DerivationError(f"part {n} takes {_ARITY[n]} formulas, got {len(params)}")
    if n == 1:
        a, x, c = params
        return implies(Imp(a, x), Imp(x, c), Imp(a, c))
    if ctx is None:
        raise DerivationError(f"part {n} needs a QContext")
    neg, dneg = ctx.neg, ctx.dneg
    a = params[0]
    if n == 3:
        return Imp(a, dneg(a))
    if n == 4:
        return Imp(neg(dneg(a)), neg(a))
    x = params[1]
    return {
        2: lambda: implies(Imp(a, x), neg(x), neg(a)),
        5: lambda: Imp(dneg(x), dneg(Imp(a, x))),
        6: lambda: implies(dneg(a), neg(x), neg(Imp(a, x))),
        7: lambda: Imp(neg(a), dneg(Imp(a, x))),
        8: lambda: implies(Imp(neg(a), x), Imp(dneg(a), x), dneg(x)),
    }[n]()


def _make_robbin(n: int, ctx: QContext | None, params: tuple[Formula, ...]):
    if n == 1:
        a, x, c = params

        def make(b):
            s = b.sketch([Imp(a, x), Imp(x, c), a])
            s.mp(Imp(x, c), s.mp(Imp(a, x), a))
            s.discharge(a, Imp(x, c), Imp(a, x))
            return s.commit()
        return make

    q, neg, dneg = ctx.q, ctx.neg, ctx.dneg
    a = params[0]
    if n == 2:
        x = params[1]
        return lambda b: emit_robbin(b, 1, None, a, x, q)
    if n == 3:
        def make(b):
            s = b.sketch([a, neg(a)])
            s.mp(neg(a), a)
            s.discharge(neg(a), a)
            return s.commit()
        return make
    if n == 4:
        def make(b):
            s = b.sketch([neg(dneg(a)), a])
            qqa = s.mp(emit_robbin(s, 3, ctx, a), a)
            s.mp(neg(dneg(a)), qqa)
            s.discharge(a, neg(dneg(a)))
            return s.commit()
        return make

    x = params[1]
    ax = Imp(a, x)
    if n == 5:
        def make(b):
            s = b.sketch([dneg(x), neg(ax)])
            k = s.axiom(Scheme.K, x, a)
            r = emit_robbin(s, 1, None, x, ax, q)
            s.mp(dneg(x), s.mp(s.mp(r, k), neg(ax)))
            s.discharge(neg(ax), dneg(x))
            return s.commit()
    elif n == 6:
        def make(b):
            s = b.sketch([dneg(a), neg(x), ax])
            r = emit_robbin(s, 1, None, a, x, q)
            s.mp(dneg(a), s.mp(s.mp(r, ax), neg(x)))
            s.discharge(ax, neg(x), dneg(a))
            return s.commit()
    elif n == 7:
        def make(b):
            s = b.sketch([neg(a), neg(ax), Imp(q, x)])
            r = emit_robbin(s, 1, None, a, q, x)
            s.mp(neg(ax), s.mp(s.mp(r, neg(a)), Imp(q, x)))
            qxq = s.discharge(Imp(q, x))
            s.mp(s.axiom(Scheme.PEIRCE, q, x), qxq)
            s.discharge(neg(ax), neg(a))
            return s.commit()
    else:
        def make(b):
            s = b.sketch([Imp(neg(a), x), Imp(dneg(a), x), neg(x)])
            r = emit_robbin(s, 1, None, neg(a), x, q)
            qqa = s.mp(s.mp(r, Imp(neg(a), x)), neg(x))
            s.mp(neg(x), s.mp(Imp(dneg(a), x), qqa))
            s.discharge(neg(x), Imp(dneg(a), x), Imp(neg(a), x))
            return s.commit()
    return make


def emit_robbin(b: ProofBuilder, n: int, ctx: QContext | None, *params: Formula) -> int:
    statement = robbin_statement(n, ctx, *params)
    return b.lemma(statement, _make_robbin(n, ctx, params))


def robbin(n: int, ctx: QContext, *params: Formula) -> Proof:
    """Closed proof of part ``n`` of the eight schemes.

    1: (A->B)->(B->C)->A->C          5: QQB->QQ(A->B)
    2: (A->B)->QB->QA                6: QQA->QB->Q(A->B)
    3: A->QQA                        7: QA->QQ(A->B)
    4: QQQA->QA                      8: (QA->B)->(QQA->B)->QQB

    Only part 7 uses the Peirce scheme.
    """
    b = ProofBuilder()
    return b.proof(emit_robbin(b, n, ctx, *params))


# -- disjunction -------------------------------------------------------------

def disj(a: Formula, b: Formula) -> Formula:
    return Imp(Imp(a, b), b)


def disj_many(terms: Sequence[Formula]) -> Formula:
    """Left-nested disjunction of a nonempty list."""
    if not terms:
        raise DerivationError("empty disjunction")
    out = terms[0]
    for t in terms[1:]:
        out = disj(out, t)
    return out


def _prefixes(terms: Sequence[Formula]) -> list[Formula]:
    out = [terms[0]]
    for t in terms[1:]:
        out.append(disj(out[-1], t))
    return out


def emit_intro(b: ProofBuilder, i: int, terms: Sequence[Formula]) -> int:
    """Line terms[i] -> disj_many(terms)."""
    if not 0 <= i < len(terms):
        raise DerivationError(f"index {i} out of range for {len(terms)} terms")
    pre = _prefixes(terms)
    t = terms[i]

    def make(b):
        s = b.sketch([t])
        cur = s.get(t)
        if i > 0:
            cur = s.mp(s.axiom(Scheme.K, t, Imp(pre[i - 1], t)), cur)
        for k in range(i + 1, len(terms)):
            # D_k -> (D_k -> t_k) -> t_k is part 3 with Q := t_k
            cur = s.mp(emit_robbin(s, 3, QContext(terms[k]), pre[k - 1]), cur)
        s.discharge(t)
        return s.commit()
    return b.lemma(Imp(t, pre[-1]), make)


def _emit_either(b: ProofBuilder, x: Formula, y: Formula, c: Formula) -> int:
    """From lines x->c and y->c, a line disj(x, y) -> c.

    Assuming c->y, the disjunction yields c; that discharges to
    (c->y)->c and the Peirce scheme finishes.
    """
    xy = disj(x, y)
    s = b.sketch([xy, Imp(c, y)])
    t = s.sketch([x])
    t.mp(Imp(c, y), t.mp(Imp(x, c), x))
    t.discharge(x)
    s.mp(Imp(y, c), s.mp(xy, t.commit()))
    cyc = s.discharge(Imp(c, y))
    s.mp(s.axiom(Scheme.PEIRCE, c, y), cyc)
    s.discharge(xy)
    return s.commit()


def emit_elim(b: ProofBuilder, terms: Sequence[Formula], target: Formula,
              lines: Sequence[int]) -> int:
    """From lines terms[i] -> target, a line disj_many(terms) -> target."""
    pre = _prefixes(terms)
    for t, ln in zip(terms, lines):
        if b.formula(ln) is not Imp(t, target):
            raise DerivationError(f"expected {unparse(Imp(t, target))}")
    cur = lines[0]
    for k in range(1, len(terms)):
        cur = _emit_either(b, pre[k - 1], terms[k], target)
    b.cursor = cur
    return cur


def emit_disj_map(b: ProofBuilder, sources: Sequence[Formula], images: Sequence[Formula],
                  lines: Sequence[int]) -> int:
    """From lines sources[n] -> images[n], disj_many(sources) -> disj_many(images)."""
    if not (len(sources) == len(images) == len(lines)):
        raise DerivationError("disj_map: length mismatch")
    into = [emit_hs(b, ln, emit_intro(b, n, images)) for n, ln in enumerate(lines)]
    return emit_elim(b, sources, disj_many(images), into)


def emit_commute(b: ProofBuilder, x: Formula, y: Formula) -> int:
    """disj(x, y) -> disj(y, x)."""
    def make(b):
        # from (x->y)->y and y->x, Peirce gives x once (x->y)->x is shown
        s = b.sketch([disj(x, y), Imp(y, x), Imp(x, y)])
        s.mp(Imp(y, x), s.mp(disj(x, y), Imp(x, y)))
        xyx = s.discharge(Imp(x, y))
        s.mp(s.axiom(Scheme.PEIRCE, x, y), xyx)
        s.discharge(Imp(y, x), disj(x, y))
        return s.commit()
    return b.lemma(Imp(disj(x, y), disj(y, x)), make)


def emit_qq_distribute(b: ProofBuilder, ctx: QContext, terms: Sequence[Formula]) -> int:
    """QQ(disj_many(terms)) -> disj_many(QQ t for t in terms)."""
    qts = [ctx.dneg(t) for t in terms]
    if len(terms) == 1:
        return emit_id(b, qts[0])
    target = disj_many(qts)
    # QQ D is the disjunction D or Q, so eliminate over terms + [Q]
    lines = [emit_hs(b, emit_robbin(b, 3, ctx, t), emit_intro(b, i, qts))
             for i, t in enumerate(terms)]
    lines.append(emit_hs(b, b.axiom(Scheme.K, ctx.q, ctx.neg(terms[0])), emit_intro(b, 0, qts)))
    return emit_elim(b, [*terms, ctx.q], target, lines)


# -- deduction-level wrappers -------------------------------------------------

def _only_hyp(ded: Proof, allowed: Formula, what: str) -> None:
    if any(h is not allowed for h in ded.hypotheses):
        raise DerivationError(f"{what}: deduction may only assume {unparse(allowed)}")


def disj_intro(i: int, terms: Sequence[Formula]) -> Proof:
    """{terms[i]} |- disj_many(terms)."""
    if not 0 <= i < len(terms):
        raise DerivationError(f"index {i} out of range for {len(terms)} terms")
    t = terms[i]
    b = ProofBuilder([t])
    if len(terms) == 1:
        return b.proof(b.get(t))
    return b.proof(b.mp(emit_intro(b, i, terms), t))


def disj_elim(deds: Sequence[Proof], terms: Sequence[Formula], target: Formula) -> Proof:
    """Given {terms[i]} |- target for each i: {disj_many(terms)} |- target."""
    if len(deds) != len(terms) or not terms:
        raise DerivationError("disj_elim: need one deduction per term")
    for n, (ded, t) in enumerate(zip(deds, terms)):
        _only_hyp(ded, t, "disj_elim")
        if ded.conclusion is not target:
            raise DerivationError(f"disj_elim: deduction {n} does not conclude {unparse(target)}")
    d = disj_many(terms)
    b = ProofBuilder([d])
    if len(terms) == 1:
        return b.proof(b.embed(deds[0]))
    lines = [b.embed(_discharge(ded, t)) for ded, t in zip(deds, terms)]
    return b.proof(b.mp(emit_elim(b, terms, target, lines), d))


def disj_map(deds: Sequence[Proof], sources: Sequence[Formula],
             images: Sequence[Formula]) -> Proof:
    """Given {sources[n]} |- images[n]: {disj_many(sources)} |- disj_many(images)."""
    if not (len(deds) == len(sources) == len(images)) or not deds:
        raise DerivationError("disj_map: length mismatch")
    for n, (ded, a, c) in enumerate(zip(deds, sources, images)):
        _only_hyp(ded, a, "disj_map")
        if ded.conclusion is not c:
            raise DerivationError(f"disj_map: deduction {n} does not conclude {unparse(c)}")
    d = disj_many(sources)
    b = ProofBuilder([d])
    lines = [b.embed(_discharge(ded, a)) for ded, a in zip(deds, sources)]
    return b.proof(b.mp(emit_disj_map(b, sources, images, lines), d))


def disj_commute(p: Proof) -> Proof:
    """From a proof of (b->a)->a, one of (a->b)->b over the same hypotheses."""
    f = p.conclusion
    ba, a = _split(f, "disj_commute")
    bb, a2 = _split(ba, "disj_commute")
    if a2 is not a:
        raise DerivationError(f"disj_commute: {unparse(f)} is not a disjunction")
    b = ProofBuilder(p.hypotheses)
    i = b.embed(p)
    return b.proof(b.mp(emit_commute(b, bb, a), i))


def qq_distribute(ctx: QContext, terms: Sequence[Formula]) -> Proof:
    """{QQ(disj_many(terms))} |- disj_many(QQ t for t in terms)."""
    if not terms:
        raise DerivationError("qq_distribute: empty list")
    h = ctx.dneg(disj_many(terms))
    b = ProofBuilder([h])
    if len(terms) == 1:
        return b.proof(b.get(h))
    return b.proof(b.mp(emit_qq_distribute(b, ctx, terms), h))
