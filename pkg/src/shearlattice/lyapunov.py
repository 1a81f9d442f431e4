"""
Fourier-weight Lyapunov functionals and weighted norms.

The weight ``a(tau, eta) = exp(C1 c arctan(C2 (eta - tau)))`` decreases in
time at every frequency, fastest at the resonance eta = tau. For a short
torus that decrease outweighs the nearest-neighbour exchange, so
``sum a |w|^2`` is non-increasing. Higher Sobolev orders use
``a_j = <eta>^j a`` and the recursion
``A_j = a_j + sum_{j' < j} binom(j, j') A_{j'}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import LatticeError, RegimeError
from .integrator import Trajectory
from .lattice import LYAPUNOV_STABLE, ModeLattice, Params, classify_regime

__all__ = [
    "WeightSpec",
    "DecayReport",
    "japanese_bracket",
    "weight",
    "weight_aj",
    "weight_Aj",
    "functional",
    "decay_monitor",
    "norm",
    "sobolev_norm",
    "gevrey_norm",
    "log_gevrey_norm",
]


@dataclass(frozen=True)
class WeightSpec:
    C1: float
    C2: float
    order_j: int = 0

    def __post_init__(self):
        if not (self.C1 > 0 and self.C2 > 0):
            raise LatticeError("C1 and C2 must be positive")
        if int(self.order_j) != self.order_j or self.order_j < 0:
            raise LatticeError("order_j must be a non-negative integer")

    @classmethod
    def standard(cls, params: Params, order_j: int = 0) -> "WeightSpec":
        """The choice ``C2 = 1/k``, ``C1 = 4/k``."""
        return cls(C1=4.0 / params.k, C2=1.0 / params.k, order_j=order_j)


def japanese_bracket(eta):
    return np.sqrt(1.0 + np.square(eta))


def weight(spec: WeightSpec, params: Params, tau, eta):
    return np.exp(spec.C1 * params.c * np.arctan(spec.C2 * np.subtract(eta, tau)))


def weight_aj(spec: WeightSpec, params: Params, tau, eta, j: Optional[int] = None):
    j = spec.order_j if j is None else j
    return japanese_bracket(eta) ** j * weight(spec, params, tau, eta)


def _bracket_poly(bracket, j):
    """``A_j / a`` as a function of ``<eta>``, via the binomial recursion."""
    B = []
    for jj in range(j + 1):
        val = bracket**jj
        for jp in range(jj):
            val = val + math.comb(jj, jp) * B[jp]
        B.append(val)
    return B[j]


def weight_Aj(spec: WeightSpec, params: Params, tau, eta, j: Optional[int] = None):
    j = spec.order_j if j is None else j
    return _bracket_poly(japanese_bracket(eta), j) * weight(spec, params, tau, eta)


def functional(lattice: ModeLattice, spec: WeightSpec, params: Params, j: Optional[int] = None) -> float:
    """``sum_eta A_j(tau, eta) |w(eta)|^2``; ``j = 0`` is the base functional."""
    w = weight_Aj(spec, params, lattice.tau, lattice.etas, j)
    return math.fsum(w * np.abs(lattice.amplitudes) ** 2)


@dataclass(frozen=True)
class DecayReport:
    times: np.ndarray
    values: dict  # order -> array of functional values
    worst_increase: dict  # order -> max relative increase between samples
    tol_rel: float
    asserted: bool  # False when the regime precondition failed
    passed: bool


def decay_monitor(
    trajectory: Trajectory,
    spec: WeightSpec,
    params: Params,
    *,
    tol_rel: float = 1e-10,
    strict: bool = True,
) -> DecayReport:
    """Evaluate the functionals of every order ``0..spec.order_j`` along a
    trajectory and check that none increases between consecutive samples by
    more than ``tol_rel`` times its value.

    The initial state is included as the first sample. Outside the Lyapunov
    regime a :class:`RegimeError` is raised unless ``strict=False``, in which
    case values are reported but nothing is asserted.
    """
    asserted = classify_regime(params).holds(LYAPUNOV_STABLE)
    if not asserted and strict:
        raise RegimeError(f"decay is only asserted in the {LYAPUNOV_STABLE} regime")
    states = [(trajectory.initial.tau, trajectory.initial)]
    states += [(t, lat) for t, lat in trajectory.samples if t > trajectory.initial.tau]
    times = np.array([t for t, _ in states])
    values, worst = {}, {}
    ok = True
    for j in range(spec.order_j + 1):
        v = np.array([functional(lat, spec, params, j) for _, lat in states])
        inc = np.diff(v) / np.maximum(v[:-1], np.finfo(float).tiny)
        values[j] = v
        worst[j] = float(inc.max()) if inc.size else 0.0
        ok = ok and worst[j] <= tol_rel
    return DecayReport(times, values, worst, tol_rel, asserted, bool(ok and asserted))


def sobolev_norm(lattice: ModeLattice, s: float) -> float:
    """Squared Sobolev norm ``sum <eta>^(2s) |w|^2``."""
    if s < 0:
        raise LatticeError("Sobolev order must be >= 0")
    return math.fsum(japanese_bracket(lattice.etas) ** (2 * s) * np.abs(lattice.amplitudes) ** 2)


def log_gevrey_norm(lattice: ModeLattice, C: float) -> float:
    """Logarithm of the squared Gevrey norm ``sum exp(C|eta|) |w|^2``."""
    if C < 0:
        raise LatticeError("Gevrey constant must be >= 0")
    mag = np.abs(lattice.amplitudes)
    nz = mag > 0
    if not nz.any():
        return -math.inf
    return float(logsumexp(C * np.abs(lattice.etas[nz]) + 2.0 * np.log(mag[nz])))


def gevrey_norm(lattice: ModeLattice, C: float) -> float:
    """Squared Gevrey norm; raises ``OverflowError`` if it is not representable."""
    lg = log_gevrey_norm(lattice, C)
    if lg > math.log(np.finfo(float).max):
        raise OverflowError(f"Gevrey norm overflows (log value {lg:.6g})")
    return math.exp(lg)


def norm(lattice: ModeLattice, kind: str, order: float = 0.0) -> float:
    """Squared weighted norm: ``kind`` is ``"sobolev"`` (order s) or ``"gevrey"`` (order C)."""
    if kind == "sobolev":
        return sobolev_norm(lattice, order)
    if kind == "gevrey":
        return gevrey_norm(lattice, order)
    raise LatticeError(f"unknown norm kind {kind!r}")


def weight_ratio_excess(spec: WeightSpec, params: Params, tau: float, etas: Sequence[float]) -> np.ndarray:
    """``(a(eta-1) + a(eta+1)) - exp(2 C1 c) a(eta)``.

    This is positive near the resonance ``eta = tau``: both neighbours carry
    about the weight of ``eta`` itself, so the sum is roughly ``2 a(eta)``.
    Each neighbour separately obeys
    ``a(eta +- 1) <= exp(2 C1 c arctan(C2 / 2)) a(eta)``.
    """
    etas = np.asarray(etas, dtype=float)
    a = lambda e: weight(spec, params, tau, e)
    return a(etas - 1) + a(etas + 1) - math.exp(2 * spec.C1 * params.c) * a(etas)
