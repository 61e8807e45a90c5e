"""Parameters and coefficient-space generator for the qubit + memory-atom model.

Physical setting
----------------
Two non-interacting qubits (labelled 1 and 2) are each exchange-coupled,
with strength ``alpha_k``, to a single auxiliary two-level atom (labelled
3 and 4 respectively).  The auxiliary atoms are damped by broadband
thermal baths with rate ``gamma`` and mean occupation ``nbar``, so each
qubit sees a structured, non-Markovian environment: the auxiliary atom
acts as a one-atom memory whose effective decoherence rate is
``gamma_eff = (2*nbar + 1) * gamma``.

Basis conventions (used everywhere in this package)
---------------------------------------------------
* Single two-level systems are ordered EXCITED FIRST: basis index 0 is
  the excited state ``|1>``, index 1 is the ground state ``|0>``.  Hence
  ``sigma_plus = |1><0| = [[0, 1], [0, 0]]`` and the thermal state is
  ``diag(nbar, nbar + 1) / (2*nbar + 1)``.
* Two-qubit matrices are ordered ``|11>, |10>, |01>, |00>`` (qubit 1 is
  the slow index).
* Reduced frequencies: ``hbar = 1`` throughout; ``omega1, omega2`` are
  the qubit frequencies, ``omega3, omega4`` the auxiliary-atom
  frequencies and ``delta_k = omega_k - omega_{k+2}`` the detunings.

Coefficient space
-----------------
For each qubit/auxiliary pair the dynamics closes on a nine-operator
basis, so a pair state is a nine-component complex coefficient vector
evolving as ``dc/dt = L c`` with the sparse generator built by
:func:`build_generator`.  The basis index layout is

====  ==============================================================
 0    thermal product state of the pair (stationary reference)
 1    qubit population imbalance on top of the thermal auxiliary atom
 2    antisymmetric qubit/auxiliary exchange coherence
 3    symmetric qubit/auxiliary exchange coherence
 4    auxiliary-atom population imbalance under the thermal qubit
 5    qubit raising coherence times thermal auxiliary atom
 6    auxiliary raising coherence times weighted qubit populations
 7    qubit lowering coherence (adjoint partner of index 5)
 8    auxiliary lowering coherence (adjoint partner of index 6)
====  ==============================================================

The generator is block diagonal over the index groups ``{0}``,
``{1, 2, 3, 4}``, ``{5, 6}`` and ``{7, 8}``; the last block is the
elementwise complex conjugate of the ``{5, 6}`` block.  Indices
``{0, 1, 5, 7}`` survive a partial trace over the auxiliary atom and
form the "relevant" subspace used by the memory-kernel treatment.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BLOCKS",
    "P_INDICES",
    "Q_INDICES",
    "InitialTerm",
    "ModelParams",
    "ParameterError",
    "build_generator",
    "initial_coefficients",
    "projector_pair",
    "thermal_state",
]

#: Index groups on which the generator acts independently.
BLOCKS: tuple[tuple[int, ...], ...] = ((0,), (1, 2, 3, 4), (5, 6), (7, 8))

#: Coefficient indices that survive the partial trace over the auxiliary atom.
P_INDICES: tuple[int, ...] = (0, 1, 5, 7)

#: Complement of :data:`P_INDICES`; traced out by the reduced description.
Q_INDICES: tuple[int, ...] = (2, 3, 4, 6, 8)


class ParameterError(ValueError):
    """Raised when model parameters are unphysical or inconsistent."""


class InitialTerm(enum.Enum):
    """The four product terms whose sum reconstructs the joint Bell state.

    The initial two-qubit state ``(|00> + |11>)/sqrt(2)`` expands into four
    operator products; each term evolves independently per qubit/auxiliary
    pair and is tagged by the qubit operator it starts from.
    """

    EE = "ee"  # |1><1| on the qubit
    GG = "gg"  # |0><0| on the qubit
    GE = "ge"  # |0><1| on the qubit (lowering coherence)
    EG = "eg"  # |1><0| on the qubit (raising coherence)


@dataclass(frozen=True)
class ModelParams:
    """Frequencies, couplings and bath parameters of the four-atom model.

    All frequencies are angular frequencies in units with ``hbar = 1``.
    ``gamma`` must be non-negative (it is a damping rate) and ``nbar``
    must be non-negative (it is a thermal occupation).  Couplings and
    detunings may take either sign, and zero coupling is allowed.
    """

    omega1: float
    omega2: float
    omega3: float
    omega4: float
    alpha1: float
    alpha2: float
    gamma: float
    nbar: float

    def __post_init__(self) -> None:
        for name in ("omega1", "omega2", "omega3", "omega4", "alpha1", "alpha2", "gamma", "nbar"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ParameterError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if self.gamma < 0:
            raise ParameterError(f"gamma must be >= 0, got {self.gamma}")
        if self.nbar < 0:
            raise ParameterError(f"nbar must be >= 0, got {self.nbar}")

    @classmethod
    def from_detunings(
        cls,
        *,
        omega1: float,
        delta1: float,
        delta2: float,
        alpha1: float,
        alpha2: float,
        gamma: float,
        nbar: float,
        omega2: float | None = None,
    ) -> "ModelParams":
        """Build parameters from qubit frequencies and detunings.

        ``omega2`` defaults to ``omega1`` (the symmetric configuration used
        by all bundled presets); the auxiliary frequencies follow from
        ``omega_{k+2} = omega_k - delta_k``.
        """
        w2 = omega1 if omega2 is None else omega2
        return cls(
            omega1=omega1,
            omega2=w2,
            omega3=omega1 - delta1,
            omega4=w2 - delta2,
            alpha1=alpha1,
            alpha2=alpha2,
            gamma=gamma,
            nbar=nbar,
        )

    @property
    def gamma_eff(self) -> float:
        """Effective decoherence rate ``(2*nbar + 1) * gamma``."""
        return (2.0 * self.nbar + 1.0) * self.gamma

    @property
    def delta1(self) -> float:
        return self.omega1 - self.omega3

    @property
    def delta2(self) -> float:
        return self.omega2 - self.omega4

    def qubit_frequency(self, k: int) -> float:
        _check_subsystem(k)
        return self.omega1 if k == 1 else self.omega2

    def auxiliary_frequency(self, k: int) -> float:
        _check_subsystem(k)
        return self.omega3 if k == 1 else self.omega4

    def coupling(self, k: int) -> float:
        _check_subsystem(k)
        return self.alpha1 if k == 1 else self.alpha2

    def detuning(self, k: int) -> float:
        _check_subsystem(k)
        return self.delta1 if k == 1 else self.delta2


def _check_subsystem(k: int) -> None:
    if k not in (1, 2):
        raise ParameterError(f"subsystem index must be 1 or 2, got {k!r}")


def thermal_state(nbar: float) -> np.ndarray:
    """Thermal state of a damped two-level atom, excited-first ordering.

    Returns ``diag(nbar, nbar + 1) / (2*nbar + 1)``: the excited-state
    population sits in the [0, 0] entry.  For ``nbar = 0`` this is the
    ground state; for ``nbar -> inf`` it tends to the maximally mixed
    state.
    """
    if not math.isfinite(nbar) or nbar < 0:
        raise ParameterError(f"nbar must be finite and >= 0, got {nbar!r}")
    z = 2.0 * nbar + 1.0
    return np.diag([nbar / z, (nbar + 1.0) / z])


def initial_coefficients(term: InitialTerm, nbar: float) -> np.ndarray:
    """Coefficient vector of one Bell-expansion term for a single pair.

    The auxiliary atom always starts in its thermal state, so each qubit
    operator expands exactly in the nine-operator basis:

    * ``EE``: ``|1><1|`` = thermal reference + population imbalance,
      giving ``c = (1, (nbar+1)/(2*nbar+1), 0, ..., 0)``.
    * ``GG``: ``|0><0|`` gives ``c = (1, -nbar/(2*nbar+1), 0, ..., 0)``.
    * ``EG``: ``|1><0|`` is the raising coherence, the unit vector on
      index 5.
    * ``GE``: ``|0><1|`` is the lowering coherence, the unit vector on
      index 7.
    """
    if not math.isfinite(nbar) or nbar < 0:
        raise ParameterError(f"nbar must be finite and >= 0, got {nbar!r}")
    z = 2.0 * nbar + 1.0
    c = np.zeros(9, dtype=complex)
    if term is InitialTerm.EE:
        c[0] = 1.0
        c[1] = (nbar + 1.0) / z
    elif term is InitialTerm.GG:
        c[0] = 1.0
        c[1] = -nbar / z
    elif term is InitialTerm.EG:
        c[5] = 1.0
    elif term is InitialTerm.GE:
        c[7] = 1.0
    else:  # pragma: no cover - exhaustive over the enum
        raise ParameterError(f"unknown initial term {term!r}")
    return c


def build_generator(params: ModelParams, k: int) -> np.ndarray:
    """Dense 9x9 generator of one qubit/auxiliary pair, ``dc/dt = L c``.

    Entry ``L[m, n]`` is the coefficient of basis operator ``m`` produced
    by the generator acting on basis operator ``n``.  Row and column 0
    vanish identically (the thermal product state is stationary), the
    populations close on indices ``{1, 2, 3, 4}`` and the two coherence
    sectors ``{5, 6}`` and ``{7, 8}`` are mutual complex conjugates.
    """
    _check_subsystem(k)
    alpha = params.coupling(k)
    delta = params.detuning(k)
    omega = params.qubit_frequency(k)
    omega_aux = params.auxiliary_frequency(k)
    ge = params.gamma_eff

    L = np.zeros((9, 9), dtype=complex)

    # population sector
    L[1, 2] = -2j * alpha
    L[2, 1] = -1j * alpha
    L[2, 2] = -ge
    L[2, 3] = 1j * delta
    L[2, 4] = 1j * alpha
    L[3, 2] = 1j * delta
    L[3, 3] = -ge
    L[4, 2] = 2j * alpha
    L[4, 4] = -2.0 * ge

    # raising-coherence sector
    L[5, 5] = -1j * omega
    L[5, 6] = -1j * alpha
    L[6, 5] = -1j * alpha
    L[6, 6] = -(ge + 1j * omega_aux)

    # lowering-coherence sector: conjugate of the raising sector
    L[7, 7] = 1j * omega
    L[7, 8] = 1j * alpha
    L[8, 7] = 1j * alpha
    L[8, 8] = -(ge - 1j * omega_aux)

    return L


def projector_pair() -> tuple[np.ndarray, np.ndarray]:
    """Diagonal projectors onto the reduced and traced-out subspaces.

    Returns integer matrices ``(P, Q)`` with ones on :data:`P_INDICES`
    and :data:`Q_INDICES` respectively, so ``P + Q = I``, ``P @ P = P``,
    ``Q @ Q = Q`` and ``P @ Q = 0`` hold exactly in integer arithmetic.
    """
    P = np.zeros((9, 9), dtype=np.int64)
    Q = np.zeros((9, 9), dtype=np.int64)
    for i in P_INDICES:
        P[i, i] = 1
    for i in Q_INDICES:
        Q[i, i] = 1
    return P, Q
