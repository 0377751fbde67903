"""Dual tableaux and their Q-transformed form.

Run: python3 demos/02_tableaux.py
"""
from impcalc import QContext, branches, expand, parse, q_transform
from impcalc.tableau import render_text

# T(X->Y) extends a branch with F X then T Y; F(X->Y) splits it into T X | F Y.
t = expand(parse("((p->q)->p)->p"))
print(render_text(t))
print("closed:", t.is_closed(), "| branches:", len(branches(t)))

# An open branch is a countermodel: here p true, q false.
print(render_text(expand(parse("p->q"))))

# With Q fixed, T W becomes QQ W = (W->Q)->Q and F W becomes Q W = W->Q.
ctx = QContext(parse("r"))
qt = q_transform(t, ctx)
for theta in branches(qt):
    print(" , ".join(str(term) for term in theta))
    print("   realized:", " , ".join(str(term.realize(ctx)) for term in theta))
