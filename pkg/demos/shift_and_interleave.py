"""
Two non-distal cascades
=======================

The shift on Z with both ends added, and a single convergent sequence whose
points are visited in an interleaved order.  The first has a non-commutative
enveloping semigroup; the second is WAP with an abelian one.
"""

# %%
from cascade_ellis import classify, parse_cascade, truncated_semigroup

shift = parse_cascade("shift2")
print(classify(shift).report())

# %%
# The truncated table: powers f^-2..f^2 and the two limit maps f+ and f-.
t = truncated_semigroup(shift, bound=2)
print(t.format())
print("commutative:", t.commutative)

# %%
# f+ o f- sends everything finite to -oo, f- o f+ sends it to +oo.
p, m = t.index("f+"), t.index("f-")
print("f+ o f- =", t.labels[t.table[p][m]])
print("f- o f+ =", t.labels[t.table[m][p]])

# %%
inter = parse_cascade("ishift")
ti = truncated_semigroup(inter, bound=2)
print(ti.format())
print("commutative:", ti.commutative, " all continuous:", all(ti.continuous))
