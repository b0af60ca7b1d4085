"""
Tiles of a grid-map subsystem
=============================

Build the carpet subsystem of the 3x3 pillow map, count its tiles three
ways and ask which structural properties it has.
"""

import numpy as np

from subthurston import Subsystem
from subthurston.combinatorics import check_structure, limit_set_diagnostics, tile_matrix, tile_matrix_level

carpet = Subsystem.carpet(3)
A = tile_matrix(carpet)
print("tile matrix (rows: position, columns: colour):", A.as_lists())

# matrix powers, explicit enumeration and path counting give the same integers
for n in range(1, 5):
    counts = {m: tile_matrix_level(carpet, n, m).as_lists() for m in ("power", "enumerate", "paths")}
    print(n, counts["power"], "agree" if len({str(v) for v in counts.values()}) == 1 else "DISAGREE")

rep = check_structure(carpet)
print("strongly primitive:", rep.strongly_primitive, "witness", rep.strongly_primitive_witness)

# a subsystem made of two tiles that swap faces has a two-point limit set
pair = Subsystem.two_fixed_tiles(4)
print(limit_set_diagnostics(pair))

# random subsystems are a cheap source of test cases
rng = np.random.default_rng(1)
for _ in range(3):
    sub = Subsystem.random(3, rng, p=0.6)
    print(sub.n_tiles, "tiles, surjective" if sub.surjective else "tiles, not surjective",
          tile_matrix(sub).as_lists())
