"""Exact non-Markovian dynamics of two entangled qubits with structured reservoirs.

The package tracks the reduced two-qubit density matrix of a pair of
entangled qubits, each exchange-coupled to a thermally damped auxiliary
atom, by propagating a closed 9-dimensional coefficient equation per
subsystem and reassembling the joint state.  Concurrence, entanglement of
formation and sudden-death/revival events are computed from the result.

Three independent cross-checks ship with the package: a brute-force
16-dimensional master-equation integration, a memory-kernel (Volterra)
solution of the projected dynamics, and Choi-matrix complete-positivity
tests of the reduced maps.
"""

__version__ = "0.1.0"

from .config import ConfigError, Scenario, SweepSpec, parse_scenario, parse_sweep
from .entanglement import (
    EntanglementEvent,
    EntanglementSeries,
    EventKind,
    concurrence_general,
    concurrence_x,
    entanglement_of_formation,
    extract_events,
    markovian_rate,
    precursor,
)
from .model import (
    BLOCKS,
    InitialTerm,
    ModelParams,
    P_INDICES,
    ParameterError,
    Q_INDICES,
    build_generator,
    initial_coefficients,
    projector_pair,
    thermal_state,
)
from .nzkernel import MemoryKernelSamples, build_kernel, local_term, solve_nz
from .oracle import (
    build_full_liouvillian,
    choi_of_subsystem_map,
    evolve_full,
    partial_trace_34,
)
from .pipeline import SimulationResult, simulate
from .presets import PRESETS, default_grid, preset_params
from .propagator import (
    BlockPropagator,
    SubsystemTrajectory,
    TimeGrid,
    evolve_subsystem,
    propagate,
)
from .reconstruction import (
    XStateMatrix,
    XStructureError,
    assemble_rho12,
    rho12_series,
    single_atom_block,
    to_x_state,
)

__all__ = [
    "__version__",
    "BLOCKS",
    "P_INDICES",
    "Q_INDICES",
    "BlockPropagator",
    "ConfigError",
    "EntanglementEvent",
    "EntanglementSeries",
    "EventKind",
    "InitialTerm",
    "MemoryKernelSamples",
    "ModelParams",
    "PRESETS",
    "ParameterError",
    "Scenario",
    "SimulationResult",
    "SubsystemTrajectory",
    "SweepSpec",
    "TimeGrid",
    "XStateMatrix",
    "XStructureError",
    "assemble_rho12",
    "build_full_liouvillian",
    "build_generator",
    "build_kernel",
    "choi_of_subsystem_map",
    "concurrence_general",
    "concurrence_x",
    "default_grid",
    "entanglement_of_formation",
    "evolve_full",
    "evolve_subsystem",
    "extract_events",
    "initial_coefficients",
    "local_term",
    "markovian_rate",
    "parse_scenario",
    "parse_sweep",
    "partial_trace_34",
    "precursor",
    "preset_params",
    "projector_pair",
    "propagate",
    "rho12_series",
    "simulate",
    "single_atom_block",
    "solve_nz",
    "thermal_state",
    "to_x_state",
]
