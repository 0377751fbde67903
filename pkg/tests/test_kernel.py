import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from impcalc import kernel
from impcalc.derivation import prove_id
from impcalc.kernel import (MP, Axiom, Hyp, Line, MalformedProof, Proof, ProofError, Scheme,
                            dumps, instantiate, loads, proof_from_dict, proof_to_dict,
                            used_schemes)
from impcalc.syntax import Imp, Var, implies, is_tautology, parse
from strategies import random_deduction

p, q, r = Var("p"), Var("q"), Var("r")


def check(proof):
    return kernel.check(proof)


@pytest.mark.parametrize("scheme, subst, text", [
    (Scheme.K, (p, q), "p->q->p"),
    (Scheme.PEIRCE, (p, p), "((p->p)->p)->p"),
    (Scheme.S, (p, q, r), "(p->q->r)->(p->q)->p->r"),
    ("K", (q, q), "q->q->q"),
])
def test_instantiate(scheme, subst, text):
    assert instantiate(scheme, subst) is parse(text)


def test_instantiate_arity():
    with pytest.raises(ValueError):
        instantiate(Scheme.S, (p, q))
    with pytest.raises(ValueError):
        instantiate(Scheme.K, (p, q, r))
    assert [s.arity for s in Scheme] == [2, 2, 3]


def test_single_axiom_line():
    proof = Proof((), (Line(parse("p->q->p"), Axiom(Scheme.K, (p, q))),))
    assert check(proof) is parse("p->q->p")
    assert used_schemes(proof) == {Scheme.K}


def test_five_line_identity_proof():
    proof = prove_id(p)
    assert len(proof) == 5
    assert check(proof) is parse("p->p")
    assert used_schemes(proof) == {Scheme.S, Scheme.K}
    kinds = [type(ln.just).__name__ for ln in proof.lines]
    assert kinds.count("Axiom") == 3 and kinds.count("MP") == 2


def test_forward_reference_rejected():
    ax = Line(parse("p->q->p"), Axiom(Scheme.K, (p, q)))
    bad = Proof((), (Line(q, MP(1, 0)), ax))
    with pytest.raises(ProofError, match="forward reference") as info:
        check(bad)
    assert info.value.line == 0


def test_line_level_diagnostics():
    k = parse("p->q->p")
    cases = [
        (Proof((), (Line(parse("q->q->p"), Axiom(Scheme.K, (p, q))),)), 0, "K instance"),
        (Proof((), (Line(k, Axiom(Scheme.K, (p,))),)), 0, "bad axiom"),
        (Proof((p,), (Line(q, Hyp(0)),)), 0, "differs from hypothesis"),
        (Proof((p,), (Line(p, Hyp(1)),)), 0, "no hypothesis"),
        (Proof((p,), (Line(p, Hyp(0)), Line(k, Axiom(Scheme.K, (p, q))),
                      Line(p, MP(1, 0)))), 2, "mismatch"),
        (Proof((p,), (Line(p, Hyp(0)), Line(p, MP(-1, 0)))), 1, "bad line reference"),
        (Proof((), ()), 0, "empty"),
    ]
    for proof, line, reason in cases:
        with pytest.raises(ProofError, match=reason) as info:
            check(proof)
        assert info.value.line == line
        assert str(info.value).startswith(f"line {line}:")
    with pytest.raises(ProofError):
        used_schemes(Proof((), ()))


def test_rejection_is_total():
    good = prove_id(q)
    broken = Proof((), good.lines + (Line(p, Hyp(0)),))
    with pytest.raises(ProofError):
        check(broken)


def test_modus_ponens_from_hypotheses():
    proof = Proof((p, Imp(p, q)), (Line(p, Hyp(0)), Line(Imp(p, q), Hyp(1)), Line(q, MP(1, 0))))
    assert check(proof) is q
    assert used_schemes(proof) == frozenset()


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), st.lists(st.sampled_from(["p", "q->r", "s"]), max_size=3))
def test_monotone_in_hypotheses(seed, extra):
    d = random_deduction(random.Random(seed))
    widened = Proof(d.hypotheses + tuple(parse(x) for x in extra), d.lines)
    assert check(widened) is check(d)


def _mutants(proof, rng):
    lines = list(proof.lines)
    n = len(lines)
    kind = rng.choice(["swap", "edit", "index"])
    if kind == "swap" and n > 1:
        i, j = rng.sample(range(n), 2)
        lines[i], lines[j] = lines[j], lines[i]
    elif kind == "index":
        mps = [i for i, ln in enumerate(lines) if isinstance(ln.just, MP)]
        if not mps:
            return None
        i = rng.choice(mps)
        j = lines[i].just
        other = rng.randrange(n)
        just = MP(other, j.minor) if rng.random() < 0.5 else MP(j.major, other)
        if just == j:
            return None
        lines[i] = Line(lines[i].formula, just)
    else:
        i = rng.randrange(n)
        lines[i] = Line(Imp(r, lines[i].formula) if rng.random() < 0.5 else r, lines[i].just)
    return Proof(proof.hypotheses, tuple(lines))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_mutation_never_yields_a_new_accepted_conclusion(seed):
    rng = random.Random(seed)
    original = random_deduction(rng)
    want = check(original)
    mutant = _mutants(original, rng)
    if mutant is None:
        return
    try:
        got = check(mutant)
    except ProofError as e:
        assert 0 <= e.line < len(mutant)
        return
    # random deductions are not minimal: a swap may leave another valid proof,
    # but it must be a proof of something true from the same hypotheses
    if got is not want:
        assert is_tautology(implies(*mutant.hypotheses, got))


def test_serialization_roundtrip():
    proof = prove_id(parse("p->q"))
    text = dumps(proof)
    assert loads(text) == proof
    doc = json.loads(text)
    assert set(doc) == {"hypotheses", "lines"}
    assert doc["lines"][0]["just"]["kind"] == "axiom"
    assert {ln["just"]["kind"] for ln in doc["lines"]} == {"axiom", "mp"}
    assert proof_from_dict(proof_to_dict(proof)) == proof
    # whitespace and key order are not significant
    shuffled = json.dumps({"lines": doc["lines"], "hypotheses": doc["hypotheses"]}, indent=4)
    assert loads(shuffled) == proof
    with_hyp = Proof((p,), (Line(p, Hyp(0)),))
    assert loads(dumps(with_hyp)) == with_hyp


@pytest.mark.parametrize("text", [
    "not json", "[]", "{}", '{"hypotheses": [], "lines": {}}',
    '{"hypotheses": ["p->"], "lines": []}',
    '{"hypotheses": [], "lines": [{"formula": "p"}]}',
    '{"hypotheses": [], "lines": [{"formula": "p", "just": {"kind": "magic"}}]}',
    '{"hypotheses": [], "lines": [{"formula": "p", "just": {"kind": "hyp", "index": "0"}}]}',
    '{"hypotheses": [], "lines": [{"formula": "p", "just": {"kind": "axiom", "scheme": "X",'
    ' "subst": []}}]}',
    '{"hypotheses": [], "lines": [{"formula": 3, "just": {"kind": "hyp", "index": 0}}]}',
])
def test_malformed_documents(text):
    with pytest.raises(MalformedProof):
        loads(text)


def test_loaded_but_invalid_is_a_proof_error():
    doc = proof_to_dict(prove_id(p))
    doc["lines"][4]["formula"] = "q"
    with pytest.raises(ProofError) as info:
        check(proof_from_dict(doc))
    assert info.value.line == 4
