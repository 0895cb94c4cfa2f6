"""
The rotating disk
=================

f(r, theta) = (r, theta + r).  Points on radii that are rational multiples of
pi are periodic, and a single p-iterate is discontinuous at (pi, 0).
"""

# %%
from fractions import Fraction

from cascade_ellis.diskdemo import DiskPoint, disk_period, nonwap_witness

print(disk_period(DiskPoint(1)), disk_period(DiskPoint(1 + Fraction(1, 6))))

# %%
print(nonwap_witness(5).format())
