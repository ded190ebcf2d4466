"""
The GP(n) family and the triviality oracle
==========================================

Each member is balanced with unimodular abelianization, so cheap
invariants say nothing.  Coset enumeration settles the small cases.
"""

from acfx.oracle import coset_enumerate, count_homomorphisms, default_battery, triviality_verdict
from acfx.presentation import abel_det, abelianization, gen_gpn, parse_presentation

for n in range(4):
    P = gen_gpn(n)
    res = coset_enumerate(P, 10**6)
    print(f"GP{n}: {P}  det={abel_det(P)}  cosets={res.count}  peak={res.max_live}")

print(abelianization(gen_gpn(2)))

# no nontrivial map into any small symmetric group either
P = gen_gpn(2)
print({T.name: count_homomorphisms(P, T) for T in default_battery()})

# a nontrivial group gets a witness that can be checked by hand
Q = parse_presentation("x,y | xyXY, x")
v = triviality_verdict(Q)
print(v.line(), v.witness.check(Q))
