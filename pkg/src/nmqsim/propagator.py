"""Exact propagation of pair coefficient vectors via block matrix exponentials."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .model import BLOCKS, InitialTerm, ModelParams, build_generator, initial_coefficients

__all__ = [
    "BlockPropagator",
    "SubsystemTrajectory",
    "TimeGrid",
    "evolve_subsystem",
    "propagate",
]

log = logging.getLogger(__name__)

# Eigenvector condition number beyond which a block is treated as defective
# and exponentials fall back to scaling-and-squaring.
_EIG_COND_LIMIT = 1e8


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing sample times ``linspace(t_start, t_end, num_points)``."""

    t_start: float
    t_end: float
    num_points: int

    def __post_init__(self) -> None:
        if not np.isfinite(self.t_start) or not np.isfinite(self.t_end):
            raise ValueError("grid endpoints must be finite")
        if self.t_start < 0:
            raise ValueError(f"t_start must be >= 0, got {self.t_start}")
        if self.t_end <= self.t_start:
            raise ValueError(f"t_end must exceed t_start, got [{self.t_start}, {self.t_end}]")
        if int(self.num_points) != self.num_points or self.num_points < 2:
            raise ValueError(f"num_points must be an integer >= 2, got {self.num_points!r}")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.num_points)

    @property
    def step(self) -> float:
        return (self.t_end - self.t_start) / (self.num_points - 1)


class BlockPropagator:
    """Caches per-block eigendecompositions of a 9x9 generator.

    Each diagonal block is diagonalized once; ``exp(L t)`` then costs one
    phase evaluation per eigenvalue.  Blocks whose eigenvector matrix is
    ill conditioned (nearly defective; condition number above 1e8) fall
    back to dense scaling-and-squaring per requested time.  The fallback
    is silent apart from a log record.
    """

    def __init__(self, generator: np.ndarray):
        generator = np.asarray(generator, dtype=complex)
        if generator.shape != (9, 9):
            raise ValueError(f"generator must be 9x9, got shape {generator.shape}")
        if not np.all(np.isfinite(generator.view(float))):
            raise ValueError("generator contains non-finite entries")
        self.generator = generator
        self._eig: dict[tuple[int, ...], tuple[np.ndarray, np.ndarray, np.ndarray] | None] = {}
        for block in BLOCKS:
            ix = np.asarray(block)
            sub = generator[np.ix_(ix, ix)]
            w, v = np.linalg.eig(sub)
            cond = np.linalg.cond(v)
            if cond > _EIG_COND_LIMIT:
                log.info(
                    "block %s eigenvectors ill conditioned (cond=%.3g); "
                    "using scaling-and-squaring exponentials",
                    block,
                    cond,
                )
                self._eig[block] = None
            else:
                self._eig[block] = (w, v, np.linalg.inv(v))

    def apply(self, init: np.ndarray, times: np.ndarray) -> np.ndarray:
        """Evaluate ``exp(L t) @ init`` for every t; returns shape (len(times), 9)."""
        init = np.asarray(init, dtype=complex)
        if init.shape != (9,):
            raise ValueError(f"initial coefficient vector must have shape (9,), got {init.shape}")
        if not np.all(np.isfinite(init.view(float))):
            raise ValueError("initial coefficient vector contains non-finite entries")
        times = np.asarray(times, dtype=float)
        out = np.zeros((times.size, 9), dtype=complex)
        for block in BLOCKS:
            ix = np.asarray(block)
            seg = init[ix]
            if not np.any(seg):
                continue
            decomp = self._eig[block]
            if decomp is None:
                sub = self.generator[np.ix_(ix, ix)]
                for i, t in enumerate(times):
                    out[i, ix] = scipy.linalg.expm(sub * t) @ seg
            else:
                w, v, vinv = decomp
                modal = vinv @ seg
                phases = np.exp(np.outer(times, w))
                out[:, ix] = (phases * modal) @ v.T
        return out


@dataclass
class SubsystemTrajectory:
    """Coefficient trajectories of the four Bell-expansion terms for one pair."""

    k: int
    grid: TimeGrid
    terms: dict[InitialTerm, np.ndarray] = field(repr=False)

    def __getitem__(self, term: InitialTerm) -> np.ndarray:
        return self.terms[term]


def propagate(generator: np.ndarray, init: np.ndarray, grid: TimeGrid) -> np.ndarray:
    """Coefficient vector trajectory ``c(t) = exp(L t) c(0)`` on the grid."""
    return BlockPropagator(generator).apply(init, grid.points)


def evolve_subsystem(params: ModelParams, k: int, grid: TimeGrid) -> SubsystemTrajectory:
    """Evolve all four Bell-expansion terms of pair ``k`` on the grid."""
    prop = BlockPropagator(build_generator(params, k))
    times = grid.points
    terms = {
        term: prop.apply(initial_coefficients(term, params.nbar), times) for term in InitialTerm
    }
    return SubsystemTrajectory(k=k, grid=grid, terms=terms)
