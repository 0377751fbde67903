"""The proof kernel and the constructors built on it.

Run: python3 demos/03_hilbert_proofs.py
"""
from impcalc import (MP, Hyp, Line, Proof, ProofError, QContext, Scheme, check,
                     deduction_theorem, parse, prove_id, robbin, used_schemes)

# p->p from S and K in five lines.
proof = prove_id(parse("p"))
for i, line in enumerate(proof.lines):
    print(i, line.formula, "  ", line.just)
print("proves", check(proof), "using", sorted(s.value for s in used_schemes(proof)))

# {p, p->q} |- q, then discharge p with the deduction theorem.
p, pq, q = parse("p"), parse("p->q"), parse("q")
d = Proof((p, pq), (Line(p, Hyp(0)), Line(pq, Hyp(1)), Line(q, MP(1, 0))))
lifted = deduction_theorem(d, p)
print(f"{len(d)} lines -> {len(lifted)} lines:", lifted.hypotheses, "|-", check(lifted))

# The kernel rejects with the first bad line.
broken = Proof(d.hypotheses, (d.lines[1], d.lines[0], d.lines[2]))
try:
    check(broken)
except ProofError as e:
    print("rejected:", e)

# The eight helper schemes; only the seventh needs Peirce's law.
ctx = QContext(parse("r"))
for n, params in [(3, "p"), (4, "p"), (7, "p q"), (8, "p q")]:
    pr = robbin(n, ctx, *map(parse, params.split()))
    uses_peirce = Scheme.PEIRCE in used_schemes(pr)
    print(f"part {n}: {check(pr)}  ({len(pr)} lines, Peirce: {uses_peirce})")
