"""
Resonance cascade on a long torus.

Mode ``eta = j`` is resonant at ``tau = j``. Sampling at ``T_j = j - 1/2``
brackets each resonance by a unit window, during which mode ``j`` passes a
factor of about ``r_exact`` of its amplitude to ``j + 1`` (and ``j - 1``).
When that factor exceeds one, the chain ``0 -> 1 -> 2 -> ...`` grows
exponentially in time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .integrator import IntegratorConfig, Trajectory, integrate
from .lattice import UNSTABLE, ModeLattice, Params, classify_regime

__all__ = [
    "CascadeStep",
    "CascadeReport",
    "GrowthCheck",
    "ChainComparison",
    "DEFAULT_MIN_RATIO",
    "sample_time",
    "run_cascade",
    "verify_growth",
    "chain_growth_factors",
]

DEFAULT_MIN_RATIO = 5.0


def sample_time(j: int, eta_star: float = 0.0) -> float:
    """``T_j = eta_star + j - 1/2``: halfway between two resonances."""
    return eta_star + j - 0.5


@dataclass(frozen=True)
class CascadeStep:
    j: int
    T_j: float
    res_amp: float  # |w(T_j, eta_star + j)|
    sup_amp: float  # max_eta |w(T_j, eta)|
    dominant: bool  # res_amp >= 0.5 sup_amp
    ratio: float  # res_amp(j+1) / res_amp(j); nan on the last step


@dataclass
class CascadeReport:
    params: Params
    d_grow: float
    r_exact: float
    steps: list
    warnings: list = field(default_factory=list)
    trajectory: Optional[Trajectory] = field(default=None, repr=False)

    @property
    def ratios(self) -> np.ndarray:
        return np.array([s.ratio for s in self.steps[:-1]])

    @property
    def all_dominant(self) -> bool:
        return all(s.dominant for s in self.steps)

    def min_ratio_ok(self, threshold: float = DEFAULT_MIN_RATIO) -> bool:
        r = self.ratios
        return bool(r.size and np.all(r >= threshold))

    def ratio_diagnostics(self) -> list:
        """``(j, rho_j, 3/4 r_exact, rho_j - 3/4 r_exact)`` for every ratio."""
        ref = 0.75 * self.r_exact
        return [(s.j, s.ratio, ref, s.ratio - ref) for s in self.steps[:-1]]

    def records(self) -> list:
        rows = []
        for s in self.steps:
            rows.append(
                {
                    "j": s.j,
                    "T_j": s.T_j,
                    "res_amp": s.res_amp,
                    "sup_amp": s.sup_amp,
                    "dominance": int(s.dominant),
                    "ratio": s.ratio,
                    "d_pow_j": self.d_grow**s.j,
                }
            )
        return rows


def run_cascade(
    params: Params,
    omega0: ModeLattice,
    J_max: int,
    config: Optional[IntegratorConfig] = None,
    *,
    start_at_T0: bool = True,
) -> CascadeReport:
    """Integrate through the resonances ``0..J_max - 1`` and read the resonant
    amplitudes at ``T_0, ..., T_J_max``.

    By default the initial data is prescribed at ``T_0`` (the amplitudes of
    ``omega0`` are re-stamped to that time), so the first window contains the
    whole resonance of mode 0. With ``start_at_T0=False`` the data keeps its
    own time; sample times before it then read the initial amplitudes.

    Parameter-regime and initial-data hypothesis violations are recorded in
    ``warnings``; the run still proceeds.
    """
    if J_max < 1:
        raise ValueError("J_max must be >= 1")
    es = omega0.eta_star
    warnings = []
    if not classify_regime(params).holds(UNSTABLE):
        warnings.append(f"parameters are not in the {UNSTABLE} regime; growth is not expected")
    mags = np.abs(omega0.amplitudes)
    if mags.max() == 0:
        warnings.append("initial data is identically zero")
    elif abs(omega0.amplitude(es)) < 0.5 * mags.max():
        warnings.append("initial data violates |w0(eta_star)| >= 0.5 max|w0|")

    times = [sample_time(j, es) for j in range(J_max + 1)]
    start = times[0] if start_at_T0 else omega0.tau
    lat = omega0.with_state(start, omega0.amplitudes) if start_at_T0 else omega0
    later = [t for t in times if t > start]
    snap = {}
    traj = None
    if later:
        traj = integrate(lat, params, config, tau_end=times[-1], sample_times=later)
        snap = {t: s for t, s in traj.samples}

    steps = []
    amps = []
    for j, T in enumerate(times):
        state = snap.get(T, lat)
        res = abs(state.amplitude(es + j))
        sup = float(np.max(np.abs(state.amplitudes)))
        amps.append(res)
        steps.append((j, T, res, sup))
    out = []
    for i, (j, T, res, sup) in enumerate(steps):
        if i + 1 < len(steps):
            ratio = amps[i + 1] / res if res > 0 else math.nan
        else:
            ratio = math.nan
        out.append(CascadeStep(j, T, res, sup, bool(res >= 0.5 * sup) if sup > 0 else False, ratio))
    return CascadeReport(params, params.d_grow, params.r_exact, out, warnings, traj)


@dataclass(frozen=True)
class GrowthCheck:
    passed: bool
    applicable: bool
    d: float
    worst_margin: float  # min_j log(res_amp_j) - j log d

    def __bool__(self):
        return self.passed


def verify_growth(report: CascadeReport, params: Params, d: Optional[float] = None) -> GrowthCheck:
    """Check ``|w(T_j, j)| >= d^j`` at every recorded step (default ``d = d_grow``).

    For ``d <= 1`` the check is vacuous and reported as not applicable.
    """
    d = params.d_grow if d is None else d
    if d <= 1:
        return GrowthCheck(True, False, d, math.inf)
    margins = []
    for s in report.steps:
        lhs = math.log(s.res_amp) if s.res_amp > 0 else -math.inf
        margins.append(lhs - s.j * math.log(d))
    worst = min(margins)
    # tiny slack for j = 0, where equality holds up to rounding
    return GrowthCheck(worst >= -1e-12, True, d, worst)


@dataclass(frozen=True)
class ChainComparison:
    k_chain_factor: float
    k_chain_log: float
    k_chain_optimum: float
    eta_chain_log: float

    @property
    def eta_chain_factor(self) -> float:
        return math.exp(self.eta_chain_log) if self.eta_chain_log < 709 else math.inf


def chain_growth_factors(c: float, eta0: float, k0: int, k: float, t: float) -> ChainComparison:
    """Compare the echo chain descending in x-frequency with the eta-chain.

    * k-chain total gain ``(c eta0)^k0 / (k0!)^2``, maximal (about
      ``exp(sqrt(c eta0))``) for ``k0 ~ sqrt(c eta0)``;
    * eta-chain gain ``(2 pi c / k)^t``.
    """
    if int(k0) != k0 or k0 < 1:
        raise ValueError("k0 must be a positive integer")
    if not (c > 0 and eta0 > 0 and k > 0 and t >= 0):
        raise ValueError("c, eta0, k must be positive and t non-negative")
    k_log = k0 * math.log(c * eta0) - 2.0 * gammaln(k0 + 1)
    root = math.sqrt(c * eta0)
    try:
        k_factor = (c * eta0) ** k0 / math.factorial(k0) ** 2
    except OverflowError:
        k_factor = math.exp(k_log) if k_log < 709 else math.inf
    return ChainComparison(
        k_chain_factor=k_factor,
        k_chain_log=float(k_log),
        k_chain_optimum=math.exp(root) if root < 709 else math.inf,
        eta_chain_log=t * math.log(2 * math.pi * c / k),
    )
