"""
Preimages, moment generating functions and rates
================================================

Weighted preimages of a single point approach the equilibrium state. Tilting
by a second potential reproduces a pressure difference, and stationary
Markov chains on the tiles give values of the rate function.
"""

from fractions import Fraction
import math

import numpy as np

from subthurston import Colour, SplitPoint, Subsystem, constant, torus_trig
from subthurston.equilibrium import equilibrium_state
from subthurston.statistics import MarkovMeasure, mgf_pressure_check, preimage_integrals, rate_function
from subthurston.transfer import spectral_data

carpet = Subsystem.carpet(3)
phi = torus_trig([(1, 1, 0.3)])
g = torus_trig([(1, 1, 1.0)])
point = SplitPoint(Colour.WHITE, Fraction(2, 7), Fraction(3, 7))

ref = equilibrium_state(spectral_data(carpet, phi, 6)).integrate(g)
res = preimage_integrals(carpet, phi, g, point, 8)
for n, v in zip(res["n"], res["birkhoff"]):
    print(f"n={n}: orbit average {v:+.6f}, gap {abs(v - ref):.1e}")

mgf = mgf_pressure_check(carpet, phi, torus_trig([(2, 1, 0.2)]), 10, 5)
print("pressure difference", mgf["target"], "estimate at n=10", mgf["value"][-1])

zero = constant(0.0)
rng = np.random.default_rng(3)
chains = [("uniform", MarkovMeasure.uniform(carpet)), ("deterministic", MarkovMeasure.deterministic(carpet))]
chains += [(f"random {k}", MarkovMeasure.random(carpet, rng)) for k in range(3)]
for name, mm in chains:
    print(f"{name:>13}: rate {rate_function(mm, zero, math.log(8)).value:.6f}")
