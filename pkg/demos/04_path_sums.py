"""
Walks on the lattice
====================

Iterating the integral equation expands the solution into nearest-neighbour
walks. Each walk carries a time-ordered integral of Lorentzian hop factors.
"""
import math

import numpy as np

from shearlattice import Params, build_lattice, enumerate_paths, integrate, partial_sum, path_integral
from shearlattice.duhamel import EXACT, PAPER, series_tail_bound

for path in enumerate_paths(0, 2, 4):
    print(path.nodes)

###############################################################################
# A single hop across its resonance window has the closed-form gain r.

p = Params(c=0.03, L=300.0)
hop = enumerate_paths(0, 1, 1)[0]
print("resonant hop, unsigned:", path_integral(hop, p, -0.5, 0.5, PAPER).value, " 18 atan(150) =", 18 * math.atan(150))
print("resonant hop, signed  :", path_integral(hop, p, -0.5, 0.5, EXACT).value)

###############################################################################
# Summing every walk up to length J reproduces the ODE to within the tail of
# the exponential series.

q = Params(c=0.03, k=1.0)
w0 = build_lattice(0.0, -3, 3, "random", seed=7)
ode = integrate(w0, q, tau_end=2.0).final
l1 = np.abs(w0.amplitudes).sum()
for J in range(1, 6):
    ps = partial_sum(w0, q, 0.0, 2.0, J)
    lo, hi = min(ps.n_min, ode.n_min), max(ps.n_max, ode.n_max)
    err = np.max(np.abs(ps.with_window(lo, hi).amplitudes - ode.with_window(lo, hi).amplitudes))
    print(f"J={J}: max |partial - ode| = {err:.2e}   tail bound {series_tail_bound(q, 2.0, J) * l1:.2e}")
