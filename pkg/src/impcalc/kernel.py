"""Trusted proof kernel: three axiom schemes, hypotheses and modus ponens.

The checker never pattern-matches axioms.  Each axiom line carries its
substitution; the checker rebuilds the instance and compares.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Sequence, Union

from .syntax import Formula, Imp, ParseError, parse, unparse

__all__ = [
    "Scheme", "Axiom", "Hyp", "MP", "Line", "Proof", "ProofError",
    "MalformedProof", "instantiate", "check", "used_schemes",
    "proof_to_dict", "proof_from_dict", "dumps", "loads",
]


class Scheme(enum.Enum):
    PEIRCE = "PEIRCE"
    K = "K"
    S = "S"

    @property
    def arity(self) -> int:
        return 3 if self is Scheme.S else 2


def instantiate(scheme: Scheme, subst: Sequence[Formula]) -> Formula:
    """Instance of ``scheme`` under the metavariable assignment ``subst``.

    PEIRCE: ((A->B)->A)->A,  K: A->B->A,  S: (A->B->C)->(A->B)->A->C.
    """
    scheme = Scheme(scheme)
    if len(subst) != scheme.arity:
        raise ValueError(f"{scheme.value} takes {scheme.arity} formulas, got {len(subst)}")
    if scheme is Scheme.PEIRCE:
        a, b = subst
        return Imp(Imp(Imp(a, b), a), a)
    if scheme is Scheme.K:
        a, b = subst
        return Imp(a, Imp(b, a))
    a, b, c = subst
    return Imp(Imp(a, Imp(b, c)), Imp(Imp(a, b), Imp(a, c)))


@dataclass(frozen=True, slots=True)
class Axiom:
    scheme: Scheme
    subst: tuple[Formula, ...]


@dataclass(frozen=True, slots=True)
class Hyp:
    index: int


@dataclass(frozen=True, slots=True)
class MP:
    major: int  # line holding minor -> formula
    minor: int


Justification = Union[Axiom, Hyp, MP]


@dataclass(frozen=True, slots=True)
class Line:
    formula: Formula
    just: Justification


@dataclass(frozen=True, slots=True)
class Proof:
    """Hilbert-style derivation, possibly from hypotheses.

    Constructing a Proof does not validate it; run :func:`check`.
    """
    hypotheses: tuple[Formula, ...]
    lines: tuple[Line, ...]

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula

    def __len__(self) -> int:
        return len(self.lines)


class ProofError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class MalformedProof(ValueError):
    """Proof document that cannot be read at all."""


def _check_line(proof: Proof, i: int) -> None:
    line = proof.lines[i]
    f, j = line.formula, line.just
    if not isinstance(f, Formula):
        raise ProofError(i, "formula is not a Formula")
    if isinstance(j, Axiom):
        try:
            inst = instantiate(j.scheme, j.subst)
        except (ValueError, TypeError) as e:
            raise ProofError(i, f"bad axiom justification: {e}") from None
        if inst is not f:
            raise ProofError(i, f"not the {Scheme(j.scheme).value} instance it claims")
    elif isinstance(j, Hyp):
        if not (isinstance(j.index, int) and 0 <= j.index < len(proof.hypotheses)):
            raise ProofError(i, f"no hypothesis {j.index}")
        if proof.hypotheses[j.index] is not f:
            raise ProofError(i, f"differs from hypothesis {j.index}")
    elif isinstance(j, MP):
        for k in (j.major, j.minor):
            if not isinstance(k, int) or k < 0:
                raise ProofError(i, f"bad line reference {k!r}")
            if k >= i:
                raise ProofError(i, f"forward reference to line {k}")
        major = proof.lines[j.major].formula
        if not (isinstance(major, Imp)
                and major.antecedent is proof.lines[j.minor].formula
                and major.consequent is f):
            raise ProofError(i, f"modus ponens mismatch on lines {j.major}, {j.minor}")
    else:
        raise ProofError(i, f"unknown justification {j!r}")


def check(proof: Proof) -> Formula:
    """Return the conclusion of ``proof`` or raise ProofError at the first bad line."""
    if not proof.lines:
        raise ProofError(0, "empty proof")
    for i in range(len(proof.lines)):
        _check_line(proof, i)
    return proof.conclusion


def used_schemes(proof: Proof) -> frozenset[Scheme]:
    check(proof)
    return frozenset(Scheme(ln.just.scheme) for ln in proof.lines if isinstance(ln.just, Axiom))


# -- serialization -----------------------------------------------------------

def _just_to_dict(j: Justification, memo: dict) -> dict:
    if isinstance(j, Axiom):
        return {"kind": "axiom", "scheme": Scheme(j.scheme).value,
                "subst": [unparse(f, memo) for f in j.subst]}
    if isinstance(j, Hyp):
        return {"kind": "hyp", "index": j.index}
    return {"kind": "mp", "major": j.major, "minor": j.minor}


def proof_to_dict(proof: Proof) -> dict:
    memo: dict = {}
    return {
        "hypotheses": [unparse(h, memo) for h in proof.hypotheses],
        "lines": [{"formula": unparse(ln.formula, memo), "just": _just_to_dict(ln.just, memo)}
                  for ln in proof.lines],
    }


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise MalformedProof(f"{what} must be an integer")
    return x


def proof_from_dict(doc: dict) -> Proof:
    """Inverse of :func:`proof_to_dict`.  Shape errors raise MalformedProof."""
    cache: dict[str, Formula] = {}

    def formula(text) -> Formula:
        if not isinstance(text, str):
            raise MalformedProof("formulas must be strings")
        if text not in cache:
            try:
                cache[text] = parse(text)
            except ParseError as e:
                raise MalformedProof(f"bad formula {text!r}: {e}") from None
        return cache[text]

    try:
        hyps = doc["hypotheses"]
        raw_lines = doc["lines"]
    except (KeyError, TypeError):
        raise MalformedProof("expected fields 'hypotheses' and 'lines'") from None
    if not isinstance(hyps, list) or not isinstance(raw_lines, list):
        raise MalformedProof("'hypotheses' and 'lines' must be arrays")
    lines = []
    for n, raw in enumerate(raw_lines):
        try:
            f = formula(raw["formula"])
            j = raw["just"]
            kind = j["kind"]
            if kind == "axiom":
                try:
                    scheme = Scheme(j["scheme"])
                except ValueError:
                    raise MalformedProof(f"line {n}: unknown scheme {j['scheme']!r}") from None
                if not isinstance(j["subst"], list):
                    raise MalformedProof(f"line {n}: subst must be an array")
                just = Axiom(scheme, tuple(formula(s) for s in j["subst"]))
            elif kind == "hyp":
                just = Hyp(_int(j["index"], "index"))
            elif kind == "mp":
                just = MP(_int(j["major"], "major"), _int(j["minor"], "minor"))
            else:
                raise MalformedProof(f"line {n}: unknown kind {kind!r}")
        except (KeyError, TypeError):
            raise MalformedProof(f"line {n}: missing or mistyped field") from None
        lines.append(Line(f, just))
    return Proof(tuple(formula(h) for h in hyps), tuple(lines))


def dumps(proof: Proof) -> str:
    # one proof line per text line keeps diffs readable
    doc = proof_to_dict(proof)
    head = json.dumps(doc["hypotheses"], ensure_ascii=False)
    body = ",\n".join(json.dumps(ln, ensure_ascii=False, separators=(",", ":"))
                      for ln in doc["lines"])
    return f'{{"hypotheses":{head},\n"lines":[\n{body}\n]}}\n'


def loads(text: str) -> Proof:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedProof(f"not JSON: {e}") from None
    return proof_from_dict(doc)
