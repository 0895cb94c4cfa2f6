"""
All points periodic: the Ellis group as residues
================================================

When every point is periodic the enveloping semigroup is a group, and each
element is determined by its residues modulo the periods.
"""

# %%
from cascade_ellis import LimitElement, Side, compose, evaluate, inverse, parse_cascade, parse_residues, realizable
from cascade_ellis import oracle
from cascade_ellis.presentation import enumerate_points

e = parse_cascade("sum(cycle(2),cycle(3))")
g = LimitElement(Side.FORWARD, parse_residues("2:1,3:2"))
gi = inverse(g, e)
print("g^-1 effective residues:", gi.effective.mapping)
print("g o g^-1 at each point:", [str(evaluate(compose(g, gi, e), e, x)) for x in enumerate_points(e, 0)])

# %%
# The oracle rebuilds the same group from function tables alone.
c = oracle.pointwise_closure(e, enumerate_points(e, 0), 12)
print(len(c), "tables; closed:", c.closed_under_composition(), "inverses:", c.has_inverses())

# %%
# Residue systems must agree on common divisors.
print(realizable(parse_residues("4:3,16:9")))
print(oracle.crt_solve([(4, 3), (16, 9)]))

# %%
# Periods 1, 2, 4, ...: the rule "half the period" is not coherent, so no
# element of order two survives the limit.
print(realizable(parse_residues("2^n:g(n)/2")))
