"""
The equilibrium state and what it satisfies
===========================================

From the eigendata of the transfer matrix we build the equilibrium measure on
depth-k tiles and check invariance, the Gibbs property, entropy and the
derivative of the pressure.
"""

from subthurston import Subsystem, torus_trig
from subthurston.equilibrium import (
    entropy_estimate,
    equilibrium_state,
    gibbs_check,
    invariance_check,
    pressure_derivative_check,
)
from subthurston.transfer import spectral_data

carpet = Subsystem.carpet(3)
phi = torus_trig([(1, 1, 0.3)])
state = equilibrium_state(spectral_data(carpet, phi, 5))

for n in (1, 3, 5):
    rep = invariance_check(state, n)
    print(f"invariance n={n}: defect {rep['max_defect']:.1e} (tolerance {rep['tol']:.0e})")

gibbs = gibbs_check(state, 5)
for row in gibbs.rows():
    print(row["n"], f"{row['min_ratio']:.4f} .. {row['max_ratio']:.4f}")
print("slope of the log-ratios:", gibbs.slope)

e = entropy_estimate(state)
print(f"entropy {e['value']:.6f} +- {e['error_bar']:.1e}, integral of phi {e['integral']:.6f}")

gamma = torus_trig([(1, 1, 0.3)])
d = pressure_derivative_check(carpet, phi, gamma, 1e-3, depth=5)
print(f"dP in direction gamma: {d['finite_difference']:.8f} vs integral {d['integral']:.8f}")
