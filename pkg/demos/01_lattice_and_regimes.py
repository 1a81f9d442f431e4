"""
Lattice basics and the regime map
=================================

A single x-frequency ``k`` of the linearised problem lives on the lattice
``eta_star + Z``; each mode talks only to its two neighbours, with a coupling
that spikes at the resonant time ``tau = eta``.
"""
import numpy as np

from shearlattice import Params, build_lattice, classify_regime, coupling, rhs

###############################################################################
# The coupling is a Lorentzian in ``eta - tau`` of width ``k``. On a long torus
# (small k) the peak is enormous.

for p in (Params(c=0.03, k=1.0), Params(c=0.03, L=300.0)):
    taus = np.array([0.0, 0.01, 0.1, 1.0])
    print(f"k = {p.k:.4g}:", np.round(coupling(p, 0.0, taus), 4))

###############################################################################
# The right-hand side for a single unit mode: mass moves up with a plus sign
# and down with a minus sign, so the total sum of the amplitudes is unchanged.

p = Params(c=0.2, k=1.0)
lat = build_lattice(0.0, -3, 3, "delta")
d = rhs(lat, p)
print("derivative of delta_0 at tau=0:", np.round(d.real, 4), " sum:", d.sum())

###############################################################################
# Where do stability and instability results apply?

for c, L in [(0.03, 1.0), (0.1, 2.0), (0.03, 300.0), (0.1, 100.0), (0.01, 300.0)]:
    cls = classify_regime(Params(c=c, L=L))
    held = ", ".join(name for name, *_ in cls.satisfied_conditions) or "none"
    print(f"c={c:<5} L={L:<6} -> {cls.label:16s} [{held}]")
