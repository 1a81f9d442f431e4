"""
Mode lattice for the linearized Euler equations near y + c sin(y).

After moving to coordinates that follow the Couette shear and rescaling time
as tau = k t, a single x-frequency k of the vorticity evolves on the
y-frequency lattice eta in eta_star + Z according to

    d/dtau w(eta) = - f(eta + 1, tau) w(eta + 1) + f(eta - 1, tau) w(eta - 1),
    f(eta, tau)   = (c / 2) / (k**2 + (eta - tau)**2).

Modes only talk to their nearest neighbours, and the coefficient of mode eta
peaks (Orr resonance) at tau = eta with Lorentzian width k.

The torus convention is k = 1/L: the minimal x-frequency on a torus of
length parameter L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import LatticeError

__all__ = [
    "Params",
    "ModeLattice",
    "RegimeClassification",
    "LYAPUNOV_STABLE",
    "PATHSUM_STABLE",
    "UNSTABLE",
    "INDETERMINATE",
    "coupling",
    "rhs",
    "rhs_array",
    "build_lattice",
    "total_sum",
    "classify_regime",
]

_KL_TOL = 1e-12


@dataclass(frozen=True)
class Params:
    """Physical and spectral parameters of one decoupled lattice problem.

    Give exactly one of ``k`` and ``L`` (or both, if ``k * L == 1``).

    Parameters
    ----------
    c : float
        Amplitude of the sine perturbation, ``0 <= c < 1/2``.
    k : float, optional
        x-frequency, ``k > 0``.
    L : float, optional
        Torus length parameter, ``L = 1/k``.
    eta_star : float
        Lattice offset in ``[0, 1)``.
    """

    c: float
    k: Optional[float] = None
    L: Optional[float] = None
    eta_star: float = 0.0

    def __post_init__(self):
        c, k, L = self.c, self.k, self.L
        if k is None and L is None:
            raise LatticeError("one of k or L must be given")
        for name, v in (("k", k), ("L", L)):
            if v is not None and not (v > 0 and math.isfinite(v)):
                raise LatticeError(f"{name} must be positive and finite, got {v!r}")
        if k is None:
            k = 1.0 / L
        elif L is None:
            L = 1.0 / k
        elif abs(k * L - 1.0) > _KL_TOL:
            raise LatticeError(f"inconsistent k={k!r} and L={L!r}: kL != 1")
        object.__setattr__(self, "c", float(c))
        object.__setattr__(self, "k", float(k))
        object.__setattr__(self, "L", float(L))
        object.__setattr__(self, "eta_star", float(self.eta_star))
        if not (0.0 <= self.c < 0.5) or not math.isfinite(self.c):
            raise LatticeError(f"c must lie in [0, 1/2), got {self.c!r}")
        if not (self.k > 0.0) or not math.isfinite(self.k):
            raise LatticeError(f"k must be positive and finite, got {self.k!r}")
        if not (0.0 <= self.eta_star < 1.0):
            raise LatticeError(f"eta_star must lie in [0, 1), got {self.eta_star!r}")

    @classmethod
    def from_L(cls, c: float, L: float, eta_star: float = 0.0) -> "Params":
        return cls(c=c, L=L, eta_star=eta_star)

    # Derived constants are properties so they can never drift from (c, k, L).

    @property
    def delta(self) -> float:
        """Bound 4c on a non-resonant single step over a unit time window."""
        return 4.0 * self.c

    @property
    def r_paper(self) -> float:
        """Unsigned single-resonance gain (2c/k) arctan(1/(2k))."""
        return (2.0 * self.c / self.k) * math.atan(1.0 / (2.0 * self.k))

    @property
    def r_exact(self) -> float:
        """Single-resonance gain with the true c/2 coupling, r_paper / 2."""
        return self.r_paper / 2.0

    @property
    def d_stab(self) -> float:
        """Whole-line integral of c/(k^2 + tau^2), i.e. c pi / k."""
        return self.c * math.pi / self.k

    @property
    def d_grow(self) -> float:
        """Guaranteed growth factor per resonance, (pi/10) c L."""
        return (math.pi / 10.0) * self.c * self.L


@dataclass(frozen=True)
class ModeLattice:
    """Complex amplitudes on the window ``eta_star + [n_min, n_min + len)``.

    The window is stored by its integer offset ``n_min`` so bounds stay exactly
    on the lattice. ``amplitudes`` is copied into a read-only complex array.
    """

    tau: float
    eta_star: float
    n_min: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True).ravel()
        if amps.size == 0:
            raise LatticeError("lattice window must be nonempty")
        if not np.all(np.isfinite(amps)):
            raise LatticeError("lattice amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "tau", float(self.tau))
        object.__setattr__(self, "eta_star", float(self.eta_star))
        object.__setattr__(self, "n_min", int(self.n_min))

    @property
    def size(self) -> int:
        return self.amplitudes.size

    @property
    def n_max(self) -> int:
        return self.n_min + self.size - 1

    @property
    def eta_min(self) -> float:
        return self.eta_star + self.n_min

    @property
    def eta_max(self) -> float:
        return self.eta_star + self.n_max

    @property
    def etas(self) -> np.ndarray:
        return self.eta_star + np.arange(self.n_min, self.n_max + 1, dtype=float)

    def offset_of(self, eta: float) -> int:
        """Integer lattice offset of ``eta``; raises if ``eta`` is off-lattice."""
        n = round(eta - self.eta_star)
        if abs((self.eta_star + n) - eta) > 1e-9:
            raise LatticeError(f"eta={eta!r} is not on the lattice {self.eta_star} + Z")
        return n

    def index_of(self, eta: float) -> int:
        n = self.offset_of(eta)
        if not self.n_min <= n <= self.n_max:
            raise LatticeError(f"eta={eta!r} outside window [{self.eta_min}, {self.eta_max}]")
        return n - self.n_min

    def amplitude(self, eta: float) -> complex:
        """Amplitude at ``eta``; zero outside the window (truncation)."""
        n = self.offset_of(eta)
        if self.n_min <= n <= self.n_max:
            return complex(self.amplitudes[n - self.n_min])
        return 0j

    def with_window(self, n_min: int, n_max: int) -> "ModeLattice":
        """Re-window to ``[n_min, n_max]``, zero-padding or cropping."""
        if n_max < n_min:
            raise LatticeError("empty window")
        out = np.zeros(n_max - n_min + 1, dtype=np.complex128)
        lo, hi = max(n_min, self.n_min), min(n_max, self.n_max)
        if lo <= hi:
            out[lo - n_min : hi - n_min + 1] = self.amplitudes[lo - self.n_min : hi - self.n_min + 1]
        return ModeLattice(self.tau, self.eta_star, n_min, out)

    def with_state(self, tau: float, amplitudes) -> "ModeLattice":
        return ModeLattice(tau, self.eta_star, self.n_min, amplitudes)

    def support(self) -> np.ndarray:
        """Lattice frequencies carrying nonzero amplitude, ascending."""
        return self.etas[self.amplitudes != 0]


def coupling(params: Params, eta, tau):
    """Coefficient ``(c/2) / (k^2 + (eta - tau)^2)`` of the lattice ODE.

    Vectorizes over ``eta`` and ``tau``.
    """
    x = np.subtract(eta, tau)
    out = (0.5 * params.c) / (params.k * params.k + x * x)
    return float(out) if np.ndim(out) == 0 else out


def rhs_array(etas: np.ndarray, tau: float, omega: np.ndarray, c: float, k: float) -> np.ndarray:
    """Raw-array right-hand side; modes outside ``etas`` are treated as zero."""
    x = etas - tau
    flux = ((0.5 * c) / (k * k + x * x)) * omega
    d = np.zeros_like(omega)
    d[:-1] -= flux[1:]
    d[1:] += flux[:-1]
    return d


def rhs(lattice: ModeLattice, params: Params) -> np.ndarray:
    """Time derivative of the lattice amplitudes on the same window."""
    return rhs_array(lattice.etas, lattice.tau, lattice.amplitudes, params.c, params.k)


InitSpec = Union[str, dict]


def build_lattice(
    eta_star: float,
    eta_min: float,
    eta_max: float,
    init: InitSpec = "delta",
    *,
    eta0: float = 0.0,
    modes: Optional[dict] = None,
    seed: Optional[int] = None,
    support: Optional[Sequence[float]] = None,
    tau: float = 0.0,
) -> ModeLattice:
    """Build a lattice at time ``tau`` (default 0).

    ``init`` selects the initial data:

    ``"delta"``
        unit amplitude at ``eta0``.
    ``"modes"``
        the finitely supported mapping ``modes = {eta: amplitude}``.
    ``"random"``
        standard complex normal amplitudes drawn from ``numpy.random.default_rng(seed)``
        on ``support`` (two bounds, inclusive) or on the whole window.
    """
    probe = ModeLattice(tau, eta_star, 0, [0.0])
    # bounds need not lie on the lattice; the window is every mode between them
    n_lo = math.ceil(eta_min - eta_star - 1e-9)
    n_hi = math.floor(eta_max - eta_star + 1e-9)
    if n_hi < n_lo:
        raise LatticeError(f"eta_min={eta_min} exceeds eta_max={eta_max}")
    amps = np.zeros(n_hi - n_lo + 1, dtype=np.complex128)

    def put(eta, value):
        n = probe.offset_of(eta)
        if not n_lo <= n <= n_hi:
            raise LatticeError(f"initial mode eta={eta!r} lies outside the window [{eta_min}, {eta_max}]")
        amps[n - n_lo] = value

    if init == "delta":
        put(eta0, 1.0)
    elif init == "modes":
        if not modes:
            raise LatticeError("init='modes' needs a nonempty 'modes' mapping")
        for eta, value in sorted(modes.items()):
            put(float(eta), complex(value))
    elif init == "random":
        if seed is None:
            raise LatticeError("random initial data needs an explicit seed")
        if support is None:
            lo, hi = n_lo, n_hi
        else:
            lo = math.ceil(support[0] - eta_star - 1e-9)
            hi = math.floor(support[1] - eta_star + 1e-9)
        if not (n_lo <= lo <= hi <= n_hi):
            raise LatticeError("random support must lie inside the window")
        rng = np.random.default_rng(seed)
        m = hi - lo + 1
        amps[lo - n_lo : hi - n_lo + 1] = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    else:
        raise LatticeError(f"unknown init spec {init!r}")
    return ModeLattice(tau, eta_star, n_lo, amps)


def total_sum(lattice: ModeLattice) -> complex:
    """Sum of all amplitudes (conserved by the infinite-lattice dynamics).

    Uses ``math.fsum`` on real and imaginary parts, so the result is correctly
    rounded and independent of summation order.
    """
    a = lattice.amplitudes
    return complex(math.fsum(a.real), math.fsum(a.imag))


# Regime labels.
LYAPUNOV_STABLE = "LYAPUNOV_STABLE"
PATHSUM_STABLE = "PATHSUM_STABLE"
UNSTABLE = "UNSTABLE"
INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class RegimeClassification:
    """Outcome of :func:`classify_regime`.

    ``label`` is the primary label. ``regimes`` holds every label whose
    conditions hold, so a short torus can be both path-sum and Lyapunov
    stable. ``conditions`` lists ``(name, value, threshold, holds)``.
    """

    label: str
    regimes: frozenset
    conditions: tuple

    def holds(self, regime: str) -> bool:
        return regime in self.regimes

    @property
    def satisfied_conditions(self) -> list:
        return [(name, value, threshold) for name, value, threshold, ok in self.conditions if ok]


def classify_regime(params: Params) -> RegimeClassification:
    """Place ``params`` in the stability / instability regimes.

    * UNSTABLE: ``pi c L > 20`` and ``pi c^2 L < 1``.
    * PATHSUM_STABLE: ``2 pi c L < 1``.
    * LYAPUNOV_STABLE: ``4 - 2 exp(2 c L) > 0`` (and not UNSTABLE).

    Precedence for ``label``: UNSTABLE, PATHSUM_STABLE, LYAPUNOV_STABLE,
    INDETERMINATE.
    """
    c, L = params.c, params.L
    pi_cL = math.pi * c * L
    pi_c2L = math.pi * c * c * L
    two_pi_cL = 2.0 * math.pi * c * L
    lyap = 4.0 - 2.0 * math.exp(2.0 * c * L) if 2.0 * c * L < 700 else -math.inf

    conds = (
        ("pi*c*L > 20", pi_cL, 20.0, pi_cL > 20.0),
        ("pi*c^2*L < 1", pi_c2L, 1.0, pi_c2L < 1.0),
        ("2*pi*c*L < 1", two_pi_cL, 1.0, two_pi_cL < 1.0),
        ("4 - 2*exp(2*c*L) > 0", lyap, 0.0, lyap > 0.0),
    )
    unstable = conds[0][3] and conds[1][3]
    regimes = set()
    if unstable:
        regimes.add(UNSTABLE)
    else:
        if conds[2][3]:
            regimes.add(PATHSUM_STABLE)
        if conds[3][3]:
            regimes.add(LYAPUNOV_STABLE)

    for label in (UNSTABLE, PATHSUM_STABLE, LYAPUNOV_STABLE):
        if label in regimes:
            break
    else:
        label = INDETERMINATE
    return RegimeClassification(label, frozenset(regimes), conds)
