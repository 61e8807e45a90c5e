"""Concurrence, entanglement of formation, and death/revival bookkeeping.

Two independent routes to the concurrence are provided.  The analytic
X-state formula C = 2 max(0, |f| - sqrt(b c)) is the default path; the
general eigenvalue construction (spin-flip, square roots of eigenvalues of
rho rho~) exists to cross-check it and is an order of magnitude costlier.

The unclamped quantity 2(|f| - sqrt(b c)), called the precursor here, is
what the dynamics actually drives; the concurrence is its positive part.
Watching the precursor go negative and come back is how sudden death and
revival are detected.
"""

import enum
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import xlogy

from .model import ModelParams
from .propagator import TimeGrid
from .reconstruction import XStateMatrix

__all__ = [
    "EventKind",
    "EntanglementEvent",
    "EntanglementSeries",
    "concurrence_general",
    "concurrence_general_series",
    "concurrence_x",
    "precursor",
    "precursor_from_components",
    "entanglement_of_formation",
    "markovian_rate",
    "extract_events",
]

# sigma_y (x) sigma_y in the (|11>,|10>,|01>,|00>) product basis; the value
# is ordering-independent up to this anti-diagonal sign pattern.
_SIGMA_YY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=complex,
)


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """rho~ = (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)."""
    return _SIGMA_YY @ np.conj(rho) @ _SIGMA_YY


def _psd_sqrt_batch(mats: np.ndarray) -> np.ndarray:
    # eigenvalues may be tiny-negative from floating error; clamp before sqrt
    w, v = np.linalg.eigh(mats)
    w = np.sqrt(np.clip(w, 0.0, None))
    return np.einsum("...ij,...j,...kj->...ik", v, w, np.conj(v))


def concurrence_general_series(rhos: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    """Eigenvalue-route concurrence for a batch of 4x4 density matrices.

    Computes the lambda_i as singular values of sqrt(rho~) sqrt(rho), which
    equal the square roots of the eigenvalues of rho rho~ but do not suffer
    the square-root-of-epsilon noise amplification of diagonalizing the
    non-Hermitian product directly.
    """
    rhos = np.asarray(rhos, dtype=complex)
    if rhos.ndim == 2:
        rhos = rhos[None]
    herm = np.abs(rhos - np.conj(np.swapaxes(rhos, -2, -1))).max()
    if herm > tol:
        raise ValueError(f"input not Hermitian: max deviation {herm:.3e}")
    tr = np.abs(np.trace(rhos, axis1=-2, axis2=-1) - 1.0).max()
    if tr > tol:
        raise ValueError(f"input trace differs from 1 by {tr:.3e}")
    sym = 0.5 * (rhos + np.conj(np.swapaxes(rhos, -2, -1)))
    weig = np.linalg.eigvalsh(sym)
    if weig.min() < -tol:
        raise ValueError(f"input not positive semidefinite: min eigenvalue {weig.min():.3e}")
    flipped = np.einsum("ij,njk,kl->nil", _SIGMA_YY, np.conj(sym), _SIGMA_YY)
    prod = _psd_sqrt_batch(flipped) @ _psd_sqrt_batch(sym)
    lam = np.linalg.svd(prod, compute_uv=False)  # descending
    c = lam[:, 0] - lam[:, 1:].sum(axis=1)
    return np.clip(c, 0.0, 1.0)


def concurrence_general(rho: np.ndarray, tol: float = 1e-6) -> float:
    """Wootters concurrence of an arbitrary two-qubit density matrix."""
    return float(concurrence_general_series(np.asarray(rho)[None], tol=tol)[0])


def concurrence_x(x: XStateMatrix) -> float:
    """Analytic concurrence of an X state: 2 max(0, |f| - sqrt(b c))."""
    return max(0.0, precursor(x))


def precursor(x: XStateMatrix) -> float:
    """Unclamped 2(|f| - sqrt(b c)); negative values measure how dead."""
    bc = max(x.b, 0.0) * max(x.c, 0.0)
    return 2.0 * (abs(x.f) - np.sqrt(bc))


def precursor_from_components(b, c, f) -> np.ndarray:
    """Vectorized precursor from component arrays."""
    bc = np.clip(b, 0.0, None) * np.clip(c, 0.0, None)
    return 2.0 * (np.abs(f) - np.sqrt(bc))


def entanglement_of_formation(concurrence) -> np.ndarray | float:
    """EoF from concurrence via the binary-entropy formula.

    E = h((1 + sqrt(1 - C^2))/2) with h(x) = -x log2 x - (1-x) log2(1-x);
    the endpoints are defined by the limit 0 log 0 = 0.
    """
    c = np.asarray(concurrence, dtype=float)
    if (c < -1e-12).any() or (c > 1.0 + 1e-12).any():
        raise ValueError("concurrence outside [0, 1]")
    c = np.clip(c, 0.0, 1.0)
    x = 0.5 * (1.0 + np.sqrt(1.0 - c * c))
    ent = -(xlogy(x, x) + xlogy(1.0 - x, 1.0 - x)) / np.log(2.0)
    if np.isscalar(concurrence) or np.ndim(concurrence) == 0:
        return float(ent)
    return ent


def markovian_rate(params: ModelParams, k: int) -> float:
    """Effective decay rate alpha_k^2 / gamma / (2 nbar + 1)^2 of the memoryless limit."""
    if params.gamma <= 0.0:
        raise ValueError("markovian rate requires gamma > 0")
    return params.coupling(k) ** 2 / params.gamma / (2.0 * params.nbar + 1.0) ** 2


class EventKind(enum.Enum):
    DEATH = "DEATH"
    REVIVAL = "REVIVAL"
    FINAL_DEATH = "FINAL_DEATH"


@dataclass(frozen=True)
class EntanglementEvent:
    """A zero-crossing event of the entanglement precursor.

    precise is False when the crossing was only bracketed by a single
    grid sample (sign pattern + - + across adjacent points), in which
    case the time is grid-resolution accurate rather than bisected.
    """

    kind: EventKind
    time: float
    precise: bool = True


@dataclass(frozen=True)
class EntanglementSeries:
    """Concurrence, precursor and EoF sampled on a time grid.

    precursor_fn, when provided, evaluates the same precursor at arbitrary
    times from the underlying exact propagation; event extraction uses it
    to refine crossing times by bisection.
    """

    grid: TimeGrid
    concurrence: np.ndarray
    precursor: np.ndarray
    eof: np.ndarray
    precursor_fn: Optional[Callable[[float], float]] = field(
        default=None, compare=False
    )

    def __post_init__(self):
        n = self.grid.num_points
        for name in ("concurrence", "precursor", "eof"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length does not match the grid")


def _bisect(fn, lo: float, hi: float, flo: float, time_tol: float = 1e-8) -> float:
    # flo carries the sign of fn(lo); fn(hi) has the opposite sign
    for _ in range(200):
        if hi - lo <= time_tol:
            break
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def extract_events(series: EntanglementSeries, threshold: float = 1e-6):
    """Detect entanglement deaths and revivals from the precursor.

    The precursor of this model touches zero tangentially in several
    regimes (it can reach exactly zero without changing sign), so raw
    sign crossings are not a usable death test.  Instead a two-level
    scheme is used:

      * DEATH fires when the precursor drops below `threshold`, the
        numerical-zero level separating true vanishing from floating
        noise.
      * REVIVAL fires when, once dead, the precursor climbs back above
        sqrt(threshold).  Recoveries smaller than that are indistinct
        from the tail of a tangential touch and do not count as a
        return of entanglement.

    With the default threshold 1e-6 the revival level is 1e-3, i.e. the
    measurable-concurrence scale.  If the series ends in the dead state
    the last DEATH is reported as FINAL_DEATH.

    Crossing times are refined to 1e-8 by bisection on series.precursor_fn
    when available, otherwise by linear interpolation of the samples.
    A death interval shorter than two grid steps triggers a coarse-grid
    warning and the affected events carry precise=False.
    """
    if threshold <= 0.0:
        raise ValueError("threshold must be positive")
    revive_level = float(np.sqrt(threshold))
    s = np.asarray(series.precursor, dtype=float)
    t = series.grid.points
    fn = series.precursor_fn

    def refine(i: int, level: float) -> float:
        # crossing of level between samples i and i+1
        if fn is None:
            a, b = s[i] - level, s[i + 1] - level
            if b == a:
                return float(t[i])
            return float(t[i] - a * (t[i + 1] - t[i]) / (b - a))
        return _bisect(lambda u: fn(u) - level, float(t[i]), float(t[i + 1]), s[i] - level)

    events = []
    dead = s[0] < threshold
    death_start = 0 if dead else -1
    death_pos = None
    for i in range(len(s) - 1):
        if not dead and s[i + 1] < threshold:
            events.append(EntanglementEvent(EventKind.DEATH, refine(i, threshold)))
            dead = True
            death_start = i + 1
            death_pos = len(events) - 1
        elif dead and s[i + 1] > revive_level:
            # the scan guarantees s[i] <= revive_level here, so the level
            # crossing lies in (t[i], t[i+1])
            precise = i + 1 - death_start >= 2
            if not precise:
                warnings.warn(
                    "precursor recovered within two grid steps of its death; "
                    "crossing times are grid-resolution limited",
                    stacklevel=2,
                )
                if death_pos is not None:
                    old = events[death_pos]
                    events[death_pos] = EntanglementEvent(old.kind, old.time, False)
            events.append(
                EntanglementEvent(EventKind.REVIVAL, refine(i, revive_level), precise)
            )
            dead = False
    if dead and events and events[-1].kind is EventKind.DEATH:
        last = events[-1]
        events[-1] = EntanglementEvent(EventKind.FINAL_DEATH, last.time, last.precise)
    return events
