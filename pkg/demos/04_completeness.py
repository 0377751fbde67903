"""From a closed tableau to a checked Hilbert proof.

Run: python3 demos/04_completeness.py
"""
import json
import tempfile
from pathlib import Path

from impcalc import NotATautology, QContext, check, dumps, loads, parse, synthesize

z = parse("((p->q)->p)->p")

# Q := Z gives a proof of (Z->Z)->Z, and one more modus ponens gives Z.
result = synthesize(z)
print(json.dumps(result.report(), indent=2))
assert check(result.proof) is z

# Any Q works for the intermediate stage; the conclusion is QQ Z.
for q in ["r", "p", "p->r"]:
    ctx = QContext(parse(q))
    staged = synthesize(z, q=ctx.q)
    print(f"Q = {q:<5} proves {check(staged.proof)}  in {len(staged.proof)} lines")

# The proof file is plain JSON and re-checks after a round trip.
path = Path(tempfile.mkdtemp()) / "peirce.json"
path.write_text(dumps(result.proof))
print(path, path.stat().st_size, "bytes; re-checked:", check(loads(path.read_text())))

try:
    synthesize(parse("(p->q)->q->p"))
except NotATautology as e:
    print(e)
