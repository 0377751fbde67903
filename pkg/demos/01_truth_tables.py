"""Formulas, printing and the truth-table oracle.

Run: python3 demos/01_truth_tables.py
"""
import numpy as np

from impcalc import evaluate, falsifying_valuation, is_tautology, parse, unparse, variables

# Arrows associate to the right, so the printer only parenthesizes on the left.
k = parse("p -> q -> p")
peirce = parse("((p -> q) -> p) -> p")
print(unparse(k), "|", unparse(peirce))

# Parsing is hash-consed: the same text always gives the very same object.
assert parse("p->q->p") is k

# The oracle evaluates every valuation at once as a boolean numpy array.
for f in [k, peirce, parse("(p->q)->q->p"), parse("p")]:
    bad = falsifying_valuation(f)
    verdict = "tautology" if bad is None else f"fails at {bad}"
    print(f"{unparse(f):<20} {verdict}")

# The same table by hand: one row per valuation of variables(f).
names = variables(parse("(p->q)->q->p"))
rows = np.array(np.meshgrid(*[[False, True]] * len(names), indexing="ij")).reshape(len(names), -1).T
values = [evaluate(parse("(p->q)->q->p"), dict(zip(names, map(bool, row)))) for row in rows]
print(names, values)
assert is_tautology(peirce) and not all(values)
