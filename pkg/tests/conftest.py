import numpy as np
import pytest

from shearlattice import Params, build_lattice, integrate

ACCEPTANCE_LINES = []


def record(name, passed, detail=""):
    line = f"{'PASS' if passed else 'FAIL'}  {name}"
    if detail:
        line += f"  ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def stable_params():
    return Params(c=0.03, k=1.0)


@pytest.fixture(scope="session")
def unstable_params():
    return Params(c=0.03, L=300.0)


@pytest.fixture(scope="session")
def delta0():
    return build_lattice(0.0, -16, 16, "delta")


@pytest.fixture(scope="session")
def stable_run(stable_params, delta0):
    times = np.arange(0.0, 50.0 + 1e-9, 0.5)
    return integrate(delta0, stable_params, tau_end=50.0, sample_times=list(times))


@pytest.fixture(scope="session")
def lyapunov_run(stable_params):
    lat = build_lattice(0.0, -10, 10, "random", seed=20240501)
    times = list(np.arange(0.5, 50.0 + 1e-9, 0.5))
    return integrate(lat, stable_params, tau_end=50.0, sample_times=times)


@pytest.fixture(scope="session")
def cascade_report(unstable_params, delta0):
    from shearlattice import run_cascade

    return run_cascade(unstable_params, delta0, 6)
