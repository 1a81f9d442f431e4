"""
Adaptive Dormand-Prince 5(4) integration of the lattice ODE.

The coefficients have Lorentzian peaks of width k at tau = eta, so the step
is capped at ``resonance_cap_factor * k`` whenever some window frequency is
within ``10 k`` of the current time. The window grows upward with time (the
cascade front travels with eta ~ tau) and in either direction whenever an edge
amplitude rises above the boundary tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import IntegrationError, LatticeError, WindowLimitError
from .lattice import ModeLattice, Params, rhs_array

__all__ = [
    "WindowPolicy",
    "IntegratorConfig",
    "Trajectory",
    "StepResult",
    "GronwallReport",
    "step",
    "integrate",
    "gronwall_check",
]

# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

_RESONANCE_ZONE = 10.0  # in units of k


@dataclass(frozen=True)
class WindowPolicy:
    """Window management.

    radius
        the window always covers ``eta_star + [-radius, radius]``.
    lead
        the upper bound is kept at or above ``tau + lead``.
    margin
        number of modes added when an edge is extended.
    edge_tol
        extend an edge once its amplitude exceeds ``edge_tol * max|w0|``.
    max_modes
        hard limit on the window size.
    """

    radius: int = 16
    lead: float = 32.0
    margin: int = 16
    edge_tol: float = 1e-12
    max_modes: int = 4096

    def __post_init__(self):
        if self.radius < 1 or self.margin < 1 or self.lead < 0:
            raise LatticeError("window radius/margin must be >= 1 and lead >= 0")
        if not self.edge_tol > 0 or self.max_modes < 3:
            raise LatticeError("edge_tol must be positive and max_modes >= 3")


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_step: float = 0.05
    resonance_cap_factor: float = 0.5
    window: WindowPolicy = field(default_factory=WindowPolicy)
    max_steps: int = 10_000_000

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_step", "resonance_cap_factor"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise LatticeError(f"{name} must be positive, got {v!r}")


@dataclass(frozen=True)
class StepResult:
    lattice: ModeLattice
    error: np.ndarray
    error_norm: float  # l2 norm of the embedded error estimate


@dataclass
class Trajectory:
    """Snapshots at the requested sample times, in increasing order."""

    initial: ModeLattice
    samples: list  # list of (tau, ModeLattice)
    accepted: int = 0
    rejected: int = 0
    boundary_max: float = 0.0

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.samples])

    @property
    def step_stats(self) -> dict:
        return {"accepted": self.accepted, "rejected": self.rejected}

    @property
    def final(self) -> ModeLattice:
        return self.samples[-1][1] if self.samples else self.initial

    def __iter__(self):
        return iter(self.samples)

    def __len__(self):
        return len(self.samples)


def _stages(etas, tau, y, h, c, k, k1):
    ks = [k1]
    for i in range(1, 7):
        yi = y.copy()
        for a, kj in zip(_A[i], ks):
            if a:
                yi += (h * a) * kj
        ks.append(rhs_array(etas, tau + _C[i] * h, yi, c, k))
    return ks


def _dp_step(etas, tau, y, h, c, k, k1):
    """One Dormand-Prince step; returns (y_new, err, k7)."""
    ks = _stages(etas, tau, y, h, c, k, k1)
    y_new = y.copy()
    err = np.zeros_like(y)
    for b, e, kj in zip(_B5, _E, ks):
        if b:
            y_new += (h * b) * kj
        if e:
            err += (h * e) * kj
    return y_new, err, ks[6]


def step(lattice: ModeLattice, params: Params, dtau: float) -> StepResult:
    """Advance ``lattice`` by one Dormand-Prince step of size ``dtau``.

    The 5th-order solution is returned together with the embedded 4th-order
    difference as a local error estimate.
    """
    if not dtau > 0:
        raise LatticeError(f"dtau must be positive, got {dtau!r}")
    etas, y = lattice.etas, lattice.amplitudes.copy()
    k1 = rhs_array(etas, lattice.tau, y, params.c, params.k)
    y_new, err, _ = _dp_step(etas, lattice.tau, y, dtau, params.c, params.k, k1)
    if not np.all(np.isfinite(y_new)):
        raise IntegrationError(f"non-finite amplitudes after step at tau={lattice.tau}")
    return StepResult(lattice.with_state(lattice.tau + dtau, y_new), err, float(np.linalg.norm(err)))


def _step_cap(etas, tau, params, config):
    """Largest admissible step at ``tau`` from the resonance rule."""
    k = params.k
    zone = _RESONANCE_ZONE * k
    res_cap = config.resonance_cap_factor * k
    dist = np.abs(etas - tau)
    if dist.min() < zone:
        return min(config.max_step, res_cap)
    ahead = etas[etas > tau]
    cap = config.max_step
    if ahead.size:
        # Do not jump over (or deep into) the next resonance zone.
        cap = min(cap, max(ahead[0] - zone - tau, res_cap))
    return cap


def integrate(
    lattice: ModeLattice,
    params: Params,
    config: Optional[IntegratorConfig] = None,
    tau_end: Optional[float] = None,
    sample_times: Optional[Sequence[float]] = None,
) -> Trajectory:
    """Integrate from ``lattice.tau`` to ``tau_end``.

    Steps land exactly on every requested sample time, so snapshots carry no
    interpolation error. If ``sample_times`` is omitted only ``tau_end`` is
    recorded.

    Raises
    ------
    WindowLimitError
        if the adaptive window needs more than ``config.window.max_modes`` modes.
    IntegrationError
        on a non-finite state or when the step budget is exhausted.
    """
    config = config or IntegratorConfig()
    tau0 = lattice.tau
    if tau_end is None:
        if not sample_times:
            raise LatticeError("need tau_end or sample_times")
        tau_end = max(sample_times)
    if not tau_end > tau0:
        raise LatticeError(f"tau_end={tau_end} must exceed the start time {tau0}")
    if sample_times is None:
        sample_times = [tau_end]
    targets = sorted(set(float(t) for t in sample_times))
    if targets[0] < tau0 or targets[-1] > tau_end:
        raise LatticeError("sample times must lie within [lattice.tau, tau_end]")
    if targets[-1] != tau_end:
        targets.append(float(tau_end))
    recorded = set(float(t) for t in sample_times)

    policy = config.window
    c, k, es = params.c, params.k, lattice.eta_star
    scale = float(np.max(np.abs(lattice.amplitudes))) or 1.0
    edge_thresh = policy.edge_tol * scale

    n_min = min(lattice.n_min, -policy.radius)
    n_max = max(lattice.n_max, policy.radius, math.ceil(tau0 + policy.lead - es))
    if n_max - n_min + 1 > policy.max_modes:
        raise WindowLimitError(f"initial window of {n_max - n_min + 1} modes exceeds max_modes")
    cur = lattice.with_window(n_min, n_max)
    y = cur.amplitudes.copy()
    etas = cur.etas
    tau = tau0

    traj = Trajectory(initial=lattice, samples=[])
    if tau0 in recorded:
        traj.samples.append((tau0, cur))

    h = min(config.max_step, _step_cap(etas, tau, params, config))
    k1 = rhs_array(etas, tau, y, c, k)
    ti = 0
    while ti < len(targets) and targets[ti] <= tau:
        ti += 1
    n_steps = 0
    while ti < len(targets):
        target = targets[ti]
        n_steps += 1
        if n_steps > config.max_steps:
            raise IntegrationError(f"step budget exhausted at tau={tau}")
        cap = _step_cap(etas, tau, params, config)
        h_try = min(h, cap)
        lands = tau + h_try >= target
        if lands:
            h_try = target - tau
        y_new, err, k7 = _dp_step(etas, tau, y, h_try, c, k, k1)
        if not np.all(np.isfinite(y_new)):
            raise IntegrationError(f"non-finite amplitudes at tau={tau}")
        ynorm = max(np.linalg.norm(y), np.linalg.norm(y_new))
        err_ratio = np.linalg.norm(err) / (config.abs_tol + config.rel_tol * ynorm)
        if err_ratio > 1.0:
            traj.rejected += 1
            h = 0.5 * h_try
            if tau + h == tau:
                raise IntegrationError(f"step size underflow at tau={tau}")
            continue

        traj.accepted += 1
        tau = target if lands else tau + h_try
        y = y_new
        k1 = k7
        grow = 5.0 if err_ratio == 0 else min(5.0, max(0.2, 0.9 * err_ratio ** -0.2))
        if not lands or h_try >= h:
            h = h_try * grow
        # else keep the proposed step: the landing step was artificially short

        # Window management.
        edge = max(abs(y[0]), abs(y[-1]))
        traj.boundary_max = max(traj.boundary_max, float(edge))
        ext_lo = policy.margin if abs(y[0]) > edge_thresh else 0
        ext_hi = policy.margin if abs(y[-1]) > edge_thresh else 0
        need_hi = math.ceil(tau + policy.lead - es) - n_max
        ext_hi = max(ext_hi, need_hi)
        if ext_lo or ext_hi > 0:
            ext_hi = max(ext_hi, 0)
            if (n_max + ext_hi) - (n_min - ext_lo) + 1 > policy.max_modes:
                raise WindowLimitError(
                    f"window would grow to {(n_max + ext_hi) - (n_min - ext_lo) + 1} modes "
                    f"(max_modes={policy.max_modes}) at tau={tau}"
                )
            y = np.concatenate([np.zeros(ext_lo, complex), y, np.zeros(ext_hi, complex)])
            n_min -= ext_lo
            n_max += ext_hi
            etas = es + np.arange(n_min, n_max + 1, dtype=float)
            k1 = rhs_array(etas, tau, y, c, k)

        if lands:
            if target in recorded:
                traj.samples.append((tau, ModeLattice(tau, es, n_min, y)))
            ti += 1
    return traj


@dataclass(frozen=True)
class GronwallReport:
    passed: bool
    worst_margin: float  # min over samples of (envelope exponent - log growth)
    max_growth_fraction: float  # max over samples of log growth / envelope exponent
    log_growth: np.ndarray
    envelope_exponent: np.ndarray


def _l2(lattice):
    return math.sqrt(math.fsum(np.abs(lattice.amplitudes) ** 2))


def gronwall_check(trajectory: Trajectory, params: Params, C: float = 1.0) -> GronwallReport:
    """Check ``||w(tau)|| <= exp(C c L^2 (tau - tau0)) ||w0||`` at every sample.

    ``C = 1`` is admissible: each mode receives from two neighbours with
    coefficients at most ``(c/2) L^2``. Comparisons are done on logarithms,
    so huge envelopes do not overflow.
    """
    if not trajectory.samples:
        raise LatticeError("trajectory has no samples")
    n0 = _l2(trajectory.initial)
    tau0 = trajectory.initial.tau
    logs, envs = [], []
    for tau, lat in trajectory.samples:
        n = _l2(lat)
        if n0 == 0:
            logs.append(0.0 if n == 0 else math.inf)
        else:
            logs.append(math.log(n / n0) if n > 0 else -math.inf)
        envs.append(C * params.c * params.L**2 * (tau - tau0))
    logs, envs = np.array(logs), np.array(envs)
    # slack for rounding in the norm ratio
    margins = envs - logs + 1e-12
    fractions = np.where(envs > 0, logs / np.where(envs > 0, envs, 1.0), 0.0)
    return GronwallReport(
        passed=bool(np.all(margins >= 0)),
        worst_margin=float(margins.min()),
        max_growth_fraction=float(fractions.max()),
        log_growth=logs,
        envelope_exponent=envs,
    )
