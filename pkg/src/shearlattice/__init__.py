"""Fourier-lattice laboratory for linear inviscid damping near y + c sin(y).

Submodules: :mod:`~shearlattice.lattice` (parameters, state, ODE),
:mod:`~shearlattice.integrator`, :mod:`~shearlattice.lyapunov`,
:mod:`~shearlattice.duhamel`, :mod:`~shearlattice.cascade` and
:mod:`~shearlattice.cli`.
"""

from .cascade import CascadeReport, chain_growth_factors, run_cascade, verify_growth
from .duhamel import (
    Path,
    enumerate_paths,
    nonresonant_bound,
    partial_sum,
    path_integral,
    resonance_gain,
    resonant_path_bound,
    series_tail_bound,
    smallness_check,
)
from .errors import *  # noqa: F401,F403
from .integrator import IntegratorConfig, Trajectory, WindowPolicy, gronwall_check, integrate, step
from .lattice import (
    INDETERMINATE,
    LYAPUNOV_STABLE,
    PATHSUM_STABLE,
    UNSTABLE,
    ModeLattice,
    Params,
    build_lattice,
    classify_regime,
    coupling,
    rhs,
    total_sum,
)
from .lyapunov import WeightSpec, decay_monitor, functional, norm, weight, weight_Aj, weight_aj

__version__ = "0.1.0"
