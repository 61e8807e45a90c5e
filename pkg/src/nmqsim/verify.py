"""Self-verification suites run by the `verify` CLI subcommand.

quick: physicality and the analytic-vs-eigenvalue concurrence agreement on
every preset, using the primary pipeline only.

full: adds the three independent cross-checks (the brute-force 16-dim
master-equation oracle, Choi-matrix complete positivity, and the
memory-kernel Volterra solution) plus the map factorization test.

Every check runs to completion and reports PASS or FAIL with its measured
number; nothing aborts early.  The hidden corrupt hook flips a sign in the
coefficient-space generator so that a broken primary path demonstrably
trips the oracle comparison.
"""

from dataclasses import dataclass

import numpy as np

from .entanglement import concurrence_general_series
from .model import (
    InitialTerm,
    ModelParams,
    build_generator,
    initial_coefficients,
    projector_pair,
)
from .nzkernel import build_kernel, local_term, solve_nz
from .oracle import (
    apply_product_map,
    bell_state,
    choi_of_subsystem_map,
    evolve_full,
    full_initial_state,
    partial_trace_34,
    subsystem_transfer_matrix,
)
from .presets import PRESETS, default_grid
from .propagator import BlockPropagator, SubsystemTrajectory, TimeGrid
from .reconstruction import physicality_deviations, rho12_series, x_components

__all__ = ["CheckResult", "run_quick", "run_full", "run_nz_only"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.detail}"


def _corrupted_generator(params: ModelParams, k: int) -> np.ndarray:
    gen = build_generator(params, k)
    gen[1, 2] = -gen[1, 2]  # deliberate sign flip; must trip the checks
    return gen


def _evolve(params: ModelParams, k: int, grid: TimeGrid, corrupt: bool) -> SubsystemTrajectory:
    gen = (_corrupted_generator if corrupt else build_generator)(params, k)
    prop = BlockPropagator(gen)
    terms = {
        term: prop.apply(initial_coefficients(term, params.nbar), grid.points)
        for term in InitialTerm
    }
    return SubsystemTrajectory(k=k, grid=grid, terms=terms)


def _rho_series(params: ModelParams, grid: TimeGrid, corrupt: bool) -> np.ndarray:
    t1 = _evolve(params, 1, grid, corrupt)
    t2 = _evolve(params, 2, grid, corrupt)
    return rho12_series(t1, t2, params.nbar)


def _physicality_check(name: str, params: ModelParams, grid: TimeGrid, corrupt: bool):
    rho = _rho_series(params, grid, corrupt)
    trace_dev, herm_dev, min_eig = physicality_deviations(rho)
    ok = trace_dev < 1e-9 and herm_dev < 1e-12 and min_eig > -1e-9
    try:
        x_components(rho, tol=1e-9)
    except ValueError:
        ok = False
    return (
        CheckResult(
            f"physicality[{name}]",
            ok,
            f"trace dev {trace_dev:.2e}, herm dev {herm_dev:.2e}, min eig {min_eig:.2e}",
        ),
        rho,
    )


def _concurrence_check(name: str, rho: np.ndarray):
    try:
        a, b, c, f5 = rho[:, 0, 0].real, rho[:, 1, 1].real, rho[:, 2, 2].real, rho[:, 0, 3]
        bc = np.clip(b, 0.0, None) * np.clip(c, 0.0, None)
        analytic = np.clip(2.0 * (np.abs(f5) - np.sqrt(bc)), 0.0, 1.0)
        general = concurrence_general_series(rho)
        dev = float(np.abs(analytic - general).max())
        return CheckResult(
            f"concurrence-routes[{name}]", dev <= 1e-10, f"max deviation {dev:.2e}"
        )
    except ValueError as exc:
        return CheckResult(f"concurrence-routes[{name}]", False, str(exc))


def run_quick(corrupt: bool = False, grid: TimeGrid | None = None):
    """Physicality plus concurrence-route agreement on all presets."""
    grid = grid or default_grid()
    results = []
    for name, preset in PRESETS.items():
        params = preset.params()
        phys, rho = _physicality_check(name, params, grid, corrupt)
        results.append(phys)
        results.append(_concurrence_check(name, rho))
    return results


_ORACLE_PRESETS = ("fig2", "fig3", "fig6")


def _oracle_check(name: str, grid: TimeGrid, corrupt: bool) -> CheckResult:
    params = PRESETS[name].params()
    primary = _rho_series(params, grid, corrupt)
    full0 = full_initial_state(bell_state(), params.nbar)
    reduced = partial_trace_34(evolve_full(params, full0, grid))
    dev = float(np.abs(primary - reduced).max())
    return CheckResult(f"oracle-equivalence[{name}]", dev <= 1e-8, f"max deviation {dev:.2e}")


def _choi_check(nbar: float) -> CheckResult:
    alphas = (0.5, 1.0, 2.0, 3.5, 5.0)
    times = (0.25, 1.0, 2.5, 5.0, 10.0)
    worst = np.inf
    for alpha in alphas:
        params = ModelParams.from_detunings(
            omega1=10.0, delta1=0.0, delta2=0.0,
            alpha1=alpha, alpha2=alpha, gamma=0.5, nbar=nbar,
        )
        for t in times:
            choi = choi_of_subsystem_map(params, 1, t)
            worst = min(worst, float(np.linalg.eigvalsh(choi).min()))
    return CheckResult(
        f"choi-positivity[nbar={nbar:g}]", worst >= -1e-8, f"min eigenvalue {worst:.2e}"
    )


def _nz_check(corrupt: bool = False, t_end: float = 10.0) -> CheckResult:
    params = PRESETS["fig4"].params()
    gen = (_corrupted_generator if corrupt else build_generator)(params, 1)
    projectors = projector_pair()
    local = local_term(gen, projectors)
    prop = BlockPropagator(gen)
    devs = {}
    for dt in (2e-3, 1e-3):
        grid = TimeGrid(0.0, t_end, int(round(t_end / dt)) + 1)
        kernel = build_kernel(gen, projectors, grid)
        worst = 0.0
        for term in (InitialTerm.EE, InitialTerm.EG):
            init = initial_coefficients(term, params.nbar)
            nz = solve_nz(kernel, local, init, grid)
            direct = prop.apply(init, grid.points)
            direct[:, (2, 3, 4, 6, 8)] = 0.0
            worst = max(worst, float(np.abs(nz - direct).max()))
        devs[dt] = worst
    ratio = devs[2e-3] / devs[1e-3]
    ok = devs[1e-3] <= 2e-4 and 3.5 <= ratio <= 4.5
    return CheckResult(
        "nz-volterra",
        ok,
        f"max deviation {devs[1e-3]:.2e} at dt=1e-3, convergence ratio {ratio:.2f}",
    )


def _factorization_check(name: str, t: float, corrupt: bool) -> CheckResult:
    params = PRESETS[name].params()
    grid = TimeGrid(0.0, t, 3)
    primary = _rho_series(params, grid, corrupt)[-1]
    t1 = subsystem_transfer_matrix(params, 1, t)
    t2 = subsystem_transfer_matrix(params, 2, t)
    product = apply_product_map(t1, t2, bell_state())
    dev = float(np.abs(primary - product).max())
    return CheckResult(
        f"map-factorization[{name}]", dev <= 1e-8, f"max deviation {dev:.2e}"
    )


def run_nz_only(corrupt: bool = False):
    return [_nz_check(corrupt)]


def run_full(corrupt: bool = False, fast: bool = False):
    """All quick checks plus the independent oracles.

    fast shrinks the oracle window so the suite exercises every code path
    in seconds; intended for smoke tests, not for certification.
    """
    grid = TimeGrid(0.0, 2.0, 201) if fast else default_grid()
    results = run_quick(corrupt, grid=grid)
    for name in _ORACLE_PRESETS:
        results.append(_oracle_check(name, grid, corrupt))
    for nbar in (0.0, 0.2):
        results.append(_choi_check(nbar))
    results.append(_nz_check(corrupt, t_end=2.0 if fast else 10.0))
    results.append(_factorization_check("fig2", 1.0, corrupt))
    return results
