"""Implicational propositional calculus: truth tables, dual tableaux and
Hilbert proofs synthesized from closed tableaux.

Typical use::

    from impcalc import parse, complete, check
    proof = complete(parse("((p->q)->p)->p"))
    assert check(proof) is parse("((p->q)->p)->p")
"""
from .derivation import (DerivationError, QContext, deduction_theorem, disj,
                         disj_commute, disj_elim, disj_intro, disj_many,
                         disj_map, hs, prove_id, qq_distribute, robbin,
                         robbin_statement)
from .kernel import (MP, Axiom, Hyp, Line, MalformedProof, Proof, ProofError,
                     Scheme, check, dumps, instantiate, loads, used_schemes)
from .synthesis import (NotATautology, Synthesis, axiom_proof, complete, d_of,
                        prune, rule_a, rule_b, synthesize)
from .syntax import (Formula, Imp, ParseError, Var, evaluate, is_tautology,
                     falsifying_valuation, parse, unparse, variables)
from .tableau import (Polarity, QTerm, Sign, SignedFormula, Tableau, branches,
                      expand, is_closed, q_transform)

__version__ = "0.1.0"

__all__ = [
    "DerivationError", "QContext", "deduction_theorem", "disj", "disj_commute",
    "disj_elim", "disj_intro", "disj_many", "disj_map", "hs", "prove_id",
    "qq_distribute", "robbin", "robbin_statement",
    "MP", "Axiom", "Hyp", "Line", "MalformedProof", "Proof", "ProofError",
    "Scheme", "check", "dumps", "instantiate", "loads", "used_schemes",
    "NotATautology", "Synthesis", "axiom_proof", "complete", "d_of", "prune",
    "rule_a", "rule_b", "synthesize",
    "Formula", "Imp", "ParseError", "Var", "evaluate", "is_tautology",
    "falsifying_valuation", "parse", "unparse", "variables",
    "Polarity", "QTerm", "Sign", "SignedFormula", "Tableau", "branches",
    "expand", "is_closed", "q_transform",
]
