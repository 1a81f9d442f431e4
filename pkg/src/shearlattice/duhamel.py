"""
Path expansion of the lattice dynamics.

Iterating the integral form of the lattice ODE writes ``w(t1, eta)`` as a sum
over nearest-neighbour walks ``gamma`` from the initial support to ``eta``.
Each walk contributes a time-ordered integral

    I_gamma[t0, t1] = int_{t0 <= s_0 <= ... <= s_{n-1} <= t1} prod_i g(gamma_i, s_i) ds,

where the first hop happens earliest. Two factor conventions are supported:

``"exact_half_c_signed"`` (``EXACT``)
    ``g = sigma_i (c/2) / (k^2 + (gamma_i - s)^2)`` with ``sigma_i = +1`` for
    an upward hop and ``-1`` for a downward hop; these are the true ODE
    weights, so summing them reproduces Picard iterates.
``"paper_c"`` (``PAPER``)
    ``g = c / (k^2 + (gamma_i - s)^2)``, unsigned. This is the majorant used
    by the stability and instability estimates.

Walk integrals are evaluated as nested running integrals
``F_0 = 1, F_{i+1}(s) = int_{t0}^{s} g_i F_i``, on Chebyshev panels refined
around the Lorentzian peaks until successive refinements agree.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.special import gammainc, gammaln

from .errors import DomainError, LatticeError, PathCountError, QuadratureError
from .lattice import ModeLattice, Params

__all__ = [
    "Path",
    "PathIntegralResult",
    "NonresonantBound",
    "SmallnessReport",
    "EXACT",
    "PAPER",
    "lattice_distance",
    "count_paths",
    "enumerate_paths",
    "path_integral",
    "partial_sum",
    "duhamel_term_bound",
    "series_tail_bound",
    "stability_envelope",
    "nonresonant_bound",
    "nonresonant_step_integral",
    "resonance_gain",
    "smallness_check",
    "resonant_path_bound",
]

EXACT = "exact_half_c_signed"
PAPER = "paper_c"
_CONVENTIONS = (EXACT, PAPER)

DEFAULT_PATH_CAP = 10**6


@dataclass(frozen=True)
class Path:
    nodes: tuple

    def __post_init__(self):
        nodes = tuple(float(x) for x in self.nodes)
        if len(nodes) < 2:
            raise LatticeError("a path needs at least one hop")
        for a, b in zip(nodes, nodes[1:]):
            if abs(abs(b - a) - 1.0) > 1e-12:
                raise LatticeError(f"consecutive path nodes {a}, {b} are not neighbours")
        object.__setattr__(self, "nodes", nodes)

    def __len__(self):
        return len(self.nodes) - 1

    @property
    def signs(self) -> tuple:
        return tuple(1 if b > a else -1 for a, b in zip(self.nodes, self.nodes[1:]))

    @property
    def start(self) -> float:
        return self.nodes[0]

    @property
    def end(self) -> float:
        return self.nodes[-1]


def lattice_distance(eta0: float, eta1: float) -> int:
    """Length of the shortest nontrivial path; a mode is at distance 2 from itself."""
    n = round(eta1 - eta0)
    if abs(n - (eta1 - eta0)) > 1e-9:
        raise LatticeError(f"{eta0} and {eta1} are not on the same lattice")
    return abs(n) if n else 2


def count_paths(eta0: float, eta1: float, max_len: int, min_len: int = 1) -> int:
    """Number of paths from ``eta0`` to ``eta1`` with length in ``[min_len, max_len]``."""
    n = round(eta1 - eta0)
    total = 0
    for j in range(max(min_len, 1), max_len + 1):
        if (j + n) % 2 == 0 and abs(n) <= j:
            total += math.comb(j, (j + n) // 2)
    return total


def enumerate_paths(
    eta0: float,
    eta1: float,
    max_len: int,
    *,
    min_len: int = 1,
    cap: int = DEFAULT_PATH_CAP,
) -> list:
    """All paths from ``eta0`` to ``eta1`` of length ``min_len..max_len``.

    Ordered by length, then lexicographically by nodes.

    Raises
    ------
    PathCountError
        if more than ``cap`` paths would be produced.
    """
    if max_len < 1:
        raise LatticeError("max_len must be >= 1")
    n = round(eta1 - eta0)
    if abs(n - (eta1 - eta0)) > 1e-9:
        raise LatticeError(f"{eta0} and {eta1} are not on the same lattice")
    total = count_paths(eta0, eta1, max_len, min_len)
    if total > cap:
        raise PathCountError(f"{total} paths from {eta0} to {eta1} exceed the cap of {cap}")
    out = []
    for j in range(max(min_len, 1), max_len + 1):
        if (j + n) % 2 or abs(n) > j:
            continue
        ups = (j + n) // 2
        group = []
        for up_pos in itertools.combinations(range(j), ups):
            steps = [-1] * j
            for p in up_pos:
                steps[p] = 1
            nodes = [eta0]
            for s in steps:
                nodes.append(nodes[-1] + s)
            group.append(tuple(nodes))
        group.sort()
        out.extend(Path(g) for g in group)
    return out


@dataclass(frozen=True)
class PathIntegralResult:
    value: float
    convention: str
    quadrature_error: float
    bound_product: float  # product of the per-hop unsigned single integrals


# --- Chebyshev panel quadrature -------------------------------------------

_DEG = 24


@lru_cache(maxsize=None)
def _cheb_tools(n: int = _DEG):
    """Lobatto nodes on [-1, 1], the values->coefficients map and the running
    integration matrix ``S`` with ``(S f)_m = int_{-1}^{x_m} p_f``."""
    x = -np.cos(np.pi * np.arange(n + 1) / n)
    V = cheb.chebvander(x, n)
    Vinv = np.linalg.inv(V)
    integ = np.zeros((n + 2, n + 1))
    for i in range(n + 1):
        e = np.zeros(n + 1)
        e[i] = 1.0
        integ[:, i] = cheb.chebint(e, lbnd=-1)
    S = cheb.chebvander(x, n + 1) @ integ @ Vinv
    return x, Vinv, S


def _lorentz(s, center, k):
    d = s - center
    return 1.0 / (k * k + d * d)


def _resolved(a, b, centers, k, tol=1e-14):
    x, Vinv, _ = _cheb_tools()
    s = 0.5 * (a + b) + 0.5 * (b - a) * x
    half = len(x) // 2
    for g in centers:
        coef = Vinv @ _lorentz(s, g, k)
        scale = np.max(np.abs(coef))
        if np.max(np.abs(coef[half:])) > tol * scale:
            return False
    return True


def _initial_mesh(t0, t1, centers, k, max_depth=60):
    """Bisect [t0, t1] until every factor is resolved at half degree per panel."""
    out = []
    stack = [(t0, t1, 0)]
    while stack:
        a, b, depth = stack.pop()
        if depth >= max_depth or _resolved(a, b, centers, k):
            out.append((a, b))
        else:
            m = 0.5 * (a + b)
            stack.append((m, b, depth + 1))
            stack.append((a, m, depth + 1))
    out.sort()
    return out


def _running_integrals(mesh, nodes, signs, scale, k, t0):
    """Nested running integrals across ``mesh``; returns ``F_n`` at every panel end."""
    x, _, S = _cheb_tools()
    n_hops = len(signs)
    carry = np.zeros(n_hops + 1)  # F_i at the start of the current panel
    ends = []
    g0 = nodes[0]
    base0 = math.atan((t0 - g0) / k)
    for a, b in mesh:
        s = 0.5 * (a + b) + 0.5 * (b - a) * x
        half = 0.5 * (b - a)
        # Level one has a closed-form antiderivative.
        F = signs[0] * scale / k * (np.arctan((s - g0) / k) - base0)
        new = carry.copy()
        new[1] = F[-1]
        for i in range(1, n_hops):
            g = signs[i] * scale * _lorentz(s, nodes[i], k) * F
            F = carry[i + 1] + half * (S @ g)
            new[i + 1] = F[-1]
        carry = new
        ends.append(carry[n_hops])
    return np.array(ends)


def _single_integral(center, k, t0, t1):
    """``int_{t0}^{t1} ds / (k^2 + (s - center)^2)`` in closed form."""
    return (math.atan((t1 - center) / k) - math.atan((t0 - center) / k)) / k


def path_integral(
    path: Path,
    params: Params,
    t0: float,
    t1: float,
    convention: str = EXACT,
    *,
    atol: float = 1e-12,
    rtol: float = 1e-13,
    max_refinements: int = 8,
) -> PathIntegralResult:
    """Time-ordered integral of the hop factors along ``path`` over ``[t0, t1]``.

    Raises
    ------
    QuadratureError
        if successive mesh refinements do not agree to ``atol + rtol |value|``;
        ``worst_interval`` names the panel with the largest disagreement.
    """
    if convention not in _CONVENTIONS:
        raise LatticeError(f"unknown convention {convention!r}")
    if not t1 > t0:
        raise LatticeError("path integrals need t0 < t1")
    k = params.k
    scale = params.c if convention == PAPER else 0.5 * params.c
    signs = path.signs if convention == EXACT else (1,) * len(path)
    hop_nodes = path.nodes[:-1]
    bound = math.prod(scale * _single_integral(g, k, t0, t1) for g in hop_nodes)

    if scale == 0.0:
        return PathIntegralResult(0.0, convention, 0.0, 0.0)
    if len(path) == 1:
        return PathIntegralResult(signs[0] * bound, convention, 0.0, bound)

    centers = sorted(set(hop_nodes))
    mesh = _initial_mesh(t0, t1, centers, k)
    ends = _running_integrals(mesh, hop_nodes, signs, scale, k, t0)
    for _ in range(max_refinements):
        fine = [p for a, b in mesh for p in ((a, 0.5 * (a + b)), (0.5 * (a + b), b))]
        fine_ends = _running_integrals(fine, hop_nodes, signs, scale, k, t0)
        value = float(fine_ends[-1])
        err = abs(value - ends[-1])
        if err <= atol + rtol * abs(value):
            return PathIntegralResult(value, convention, float(err), bound)
        diffs = np.abs(np.diff(np.concatenate([[0.0], fine_ends[1::2]])) - np.diff(np.concatenate([[0.0], ends])))
        worst = mesh[int(np.argmax(diffs))]
        mesh, ends = fine, fine_ends
    raise QuadratureError(
        f"path integral did not converge (estimate {err:.3g} > tolerance)", worst_interval=worst
    )


def partial_sum(
    omega0: ModeLattice,
    params: Params,
    t0: float,
    t1: float,
    J: int,
    *,
    cap: int = DEFAULT_PATH_CAP,
) -> ModeLattice:
    """Sum of all signed walk integrals of length ``<= J`` applied to ``omega0``.

    This is the ``J``-th Picard iterate of the integral equation on the
    infinite lattice. The output window is the input window widened by ``J``
    on both sides, at time ``t1``.
    """
    if J < 0:
        raise LatticeError("J must be >= 0")
    if J == 0:
        return ModeLattice(t1, omega0.eta_star, omega0.n_min, omega0.amplitudes)
    sources = [(eta, omega0.amplitude(eta)) for eta in omega0.support()]
    n_paths = sum(2 ** (J + 1) - 2 for _ in sources)
    if n_paths > cap:
        raise PathCountError(f"{n_paths} paths needed; reduce J or the initial support (cap {cap})")
    out = omega0.with_window(omega0.n_min - J, omega0.n_max + J)
    amps = out.amplitudes.copy()
    # Collect per-target contributions first, then add in ascending order.
    contrib = {}
    for eta0, w0 in sources:
        for length in range(1, J + 1):
            for steps in itertools.product((-1, 1), repeat=length):
                path = Path(tuple(itertools.accumulate(steps, initial=eta0)))
                value = path_integral(path, params, t0, t1, EXACT).value
                contrib.setdefault(path.end, []).append(w0 * value)
    for eta in sorted(contrib):
        vals = contrib[eta]
        idx = out.index_of(eta)
        amps[idx] += complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))
    return out.with_state(t1, amps)


def duhamel_term_bound(params: Params, t: float, j: int) -> float:
    """Bound ``(C t)^j / j!`` on the ``j``-th Picard term, ``C = c L^2``."""
    x = params.c * params.L**2 * t
    if j == 0:
        return 1.0
    if x == 0:
        return 0.0
    return math.exp(j * math.log(x) - gammaln(j + 1))


def series_tail_bound(params: Params, t: float, J: int) -> float:
    """``sum_{j > J} (C t)^j / j!`` with ``C = c L^2``.

    ``C`` bounds the l1 operator norm of the generator: every mode feeds two
    neighbours with coefficient at most ``(c/2) L^2``. The tail equals
    ``exp(C t) P(J + 1, C t)`` with ``P`` the regularized lower incomplete
    gamma function.
    """
    if t < 0 or J < 0:
        raise LatticeError("need t >= 0 and J >= 0")
    x = params.c * params.L**2 * t
    if x == 0:
        return 0.0
    p = gammainc(J + 1, x)
    if p == 0:
        return 0.0
    log_tail = x + math.log(p)
    return math.exp(log_tail) if log_tail < 709 else math.inf


def stability_envelope(params: Params, eta0: float, eta: float) -> float:
    """Path-sum bound ``(2d)^dist / (1 - 2d)`` with ``d = c pi / k``.

    Raises :class:`DomainError` unless ``2d < 1``.
    """
    d = params.d_stab
    if not 2 * d < 1:
        raise DomainError(f"stability envelope needs 2d < 1, got 2d = {2 * d:.6g}")
    return (2 * d) ** lattice_distance(eta0, eta) / (1 - 2 * d)


@dataclass(frozen=True)
class NonresonantBound:
    delta: float  # 4c
    sharp: float  # c / (k^2 + 1/4)
    worst_integral: float  # exact integral for a neighbour of the resonant mode
    smallness_ok: bool  # delta < 1/4


def nonresonant_step_integral(params: Params, offset: float, convention: str = PAPER) -> float:
    """Hop integral over one unit window centred on the resonance of mode ``j``
    for a hop from ``j + offset``; ``|offset| >= 1`` is non-resonant."""
    scale = params.c if convention == PAPER else 0.5 * params.c
    return scale * _single_integral(offset, params.k, -0.5, 0.5)


def nonresonant_bound(params: Params) -> NonresonantBound:
    c, k = params.c, params.k
    return NonresonantBound(
        delta=params.delta,
        sharp=c / (k * k + 0.25),
        worst_integral=nonresonant_step_integral(params, 1.0),
        smallness_ok=params.delta < 0.25,
    )


def resonance_gain(params: Params, convention: str = PAPER) -> float:
    """Integral of the resonant hop over its unit window, ``(2c/k) arctan(1/(2k))``
    (halved in the exact convention)."""
    if convention not in _CONVENTIONS:
        raise LatticeError(f"unknown convention {convention!r}")
    return params.r_paper if convention == PAPER else params.r_exact


@dataclass(frozen=True)
class SmallnessReport:
    r: float
    delta: float
    r_delta: float
    eight_pi_c2L: float
    checks: tuple  # (name, value, threshold, holds)

    @property
    def passed(self) -> bool:
        return all(ok for *_, ok in self.checks)

    def margin(self, name: str) -> float:
        for n, value, threshold, _ in self.checks:
            if n == name:
                return threshold - value if "<" in n else value - threshold
        raise KeyError(name)


def smallness_check(params: Params) -> SmallnessReport:
    """Evaluate ``r delta < 1/4``, ``delta < 1/4`` and ``r > 10`` separately.

    ``8 pi c^2 L`` is reported alongside for comparison; it is not used as a
    pass criterion.
    """
    r, delta = params.r_paper, params.delta
    rd = r * delta
    checks = (
        ("r*delta < 1/4", rd, 0.25, rd < 0.25),
        ("delta < 1/4", delta, 0.25, delta < 0.25),
        ("r > 10", r, 10.0, r > 10.0),
    )
    return SmallnessReport(r, delta, rd, 8 * math.pi * params.c**2 * params.L, checks)


def resonant_path_bound(
    params: Params, eta0: float, eta: float, j: int, *, r: Optional[float] = None
) -> float:
    """Bound on all walks through the resonant mode ``j`` during ``[T_j, T_{j+1}]``.

    ``(1-2 delta)^-3 (1 - 2 r delta)^-1 r (2 delta)^(|eta0-j| + |eta-j+-1|)``,
    where ``|eta-j+-1| = min(|eta-j+1|, |eta-j-1|)``. ``r`` defaults to the
    unsigned resonance gain.
    """
    delta = params.delta
    r = params.r_paper if r is None else r
    if not 2 * delta < 1:
        raise DomainError(f"resonant path bound needs 2*delta < 1, got {2 * delta:.6g}")
    if not 2 * r * delta < 1:
        raise DomainError(f"resonant path bound needs 2*r*delta < 1, got {2 * r * delta:.6g}")
    exponent = abs(eta0 - j) + min(abs(eta - j + 1), abs(eta - j - 1))
    return r * (2 * delta) ** exponent / ((1 - 2 * delta) ** 3 * (1 - 2 * r * delta))
