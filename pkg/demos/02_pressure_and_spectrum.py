"""
Pressure three ways
===================

Partition sums over tiles, iterates of the transfer operator at a point, and
the leading eigenvalue of a finite transfer matrix all estimate the same
pressure.
"""

import math
from fractions import Fraction

from subthurston import Colour, SplitPoint, Subsystem, constant, torus_trig
from subthurston.transfer import pressure_via_operator, pressure_via_tiles, spectral_data

carpet = Subsystem.carpet(3)
point = SplitPoint(Colour.WHITE, Fraction(2, 7), Fraction(3, 7))

# zero potential: the answer is the log of the number of 1-tiles per face
zero = constant(0.0)
print("log 8 =", math.log(8), " spectral:", spectral_data(carpet, zero, 4).pressure)

phi = torus_trig([(1, 1, 0.3)])
tiles = pressure_via_tiles(carpet, phi, 7)
oper = pressure_via_operator(carpet, phi, point, 7)
print(" n   tiles              operator           error bars")
for a, b in zip(tiles.rows(), oper.rows()):
    print(f"{a['n']:2d}  {a['value']:.12f}  {b['value']:.12f}  {a['error_bar']:.1e} {b['error_bar']:.1e}")

for depth in (3, 4, 5, 6):
    sp = spectral_data(carpet, phi, depth)
    print(f"depth {depth}: P = {sp.pressure:.12f}  ({sp.iterations} iterations)")

# adding a constant moves the pressure by exactly that constant
print(spectral_data(carpet, phi + 0.5, 4).pressure - spectral_data(carpet, phi, 4).pressure)
