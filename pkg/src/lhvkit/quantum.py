"""Finite-dimensional states, projective measurements and Born-rule behaviors.

Ordering convention: the composite space is built with ``np.kron`` in party
order, so ``|01>`` means party 0 in ``|0>`` and party 1 in ``|1>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from .scenario import Behavior, Scenario, StructureError, correlator

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)


class InvalidStateError(ValueError):
    pass


class InvalidMeasurementError(ValueError):
    pass


def _frozen(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = _frozen(self.entries)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 1:
            raise InvalidStateError(f"not a square matrix: shape {rho.shape}")
        if np.abs(rho - rho.conj().T).max() > 1e-12:
            raise InvalidStateError("not Hermitian")
        if abs(np.trace(rho) - 1) > 1e-12:
            raise InvalidStateError(f"trace {np.trace(rho).real} != 1")
        # PSD up to -1e-10: shifted matrix must admit a Cholesky factor
        try:
            np.linalg.cholesky(rho + 1e-10 * np.eye(rho.shape[0]))
        except np.linalg.LinAlgError:
            raise InvalidStateError("not positive semidefinite") from None
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_vector(cls, psi) -> DensityMatrix:
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)

    def expectation(self, observable) -> float:
        return float(np.trace(self.entries @ observable).real)


@dataclass(frozen=True)
class ProjectiveMeasurement:
    projectors: tuple = field(repr=False)

    def __post_init__(self):
        ps = tuple(_frozen(p) for p in self.projectors)
        if len(ps) < 1:
            raise InvalidMeasurementError("no projectors")
        d = ps[0].shape[0]
        for p in ps:
            if p.shape != (d, d):
                raise InvalidMeasurementError("projector shapes differ")
            if np.abs(p @ p - p).max() > 1e-10 or np.abs(p - p.conj().T).max() > 1e-10:
                raise InvalidMeasurementError("not an orthogonal projector")
        if np.abs(sum(ps) - np.eye(d)).max() > 1e-10:
            raise InvalidMeasurementError("projectors do not sum to identity")
        object.__setattr__(self, "projectors", ps)

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.projectors)

    @classmethod
    def computational(cls, dim: int = 2) -> ProjectiveMeasurement:
        return cls([np.diag(np.eye(dim)[k]) for k in range(dim)])


def bloch_operator(theta: float, phi: float) -> np.ndarray:
    """``cos(theta) Z + sin(theta) cos(phi) X + sin(theta) sin(phi) Y``."""
    return (np.cos(theta) * PAULI_Z + np.sin(theta) * np.cos(phi) * PAULI_X
            + np.sin(theta) * np.sin(phi) * PAULI_Y)


def qubit_observable(theta: float, phi: float = 0.0) -> ProjectiveMeasurement:
    """Spin measurement along a Bloch direction; outcome 0 is the +1 eigenspace."""
    n_sigma = bloch_operator(theta, phi)
    return ProjectiveMeasurement([(IDENTITY2 + n_sigma) / 2, (IDENTITY2 - n_sigma) / 2])


@dataclass(frozen=True)
class MeasurementAssignment:
    """Binds every (party, setting) of a scenario to a projective measurement."""

    scenario: Scenario
    local_dims: tuple[int, ...]
    measurements: tuple[tuple[ProjectiveMeasurement, ...], ...]

    def __post_init__(self):
        s = self.scenario
        dims = tuple(int(d) for d in self.local_dims)
        ms = tuple(tuple(party) for party in self.measurements)
        if len(dims) != s.parties or len(ms) != s.parties:
            raise StructureError("need one dimension and one measurement list per party")
        for p, party in enumerate(ms):
            if len(party) != s.settings_per_party[p]:
                raise StructureError(f"party {p}: wrong number of measurements")
            for x, m in enumerate(party):
                if m.dim != dims[p]:
                    raise StructureError(f"party {p} setting {x}: dimension {m.dim} != {dims[p]}")
                if m.n_outcomes != s.outcomes[p][x]:
                    raise StructureError(f"party {p} setting {x}: outcome count mismatch")
        object.__setattr__(self, "local_dims", dims)
        object.__setattr__(self, "measurements", ms)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.local_dims))

    @classmethod
    def qubits(cls, angles: Sequence[Sequence]) -> MeasurementAssignment:
        """From per-party lists of Bloch angles; each entry is ``theta`` or ``(theta, phi)``."""
        ms = []
        for party in angles:
            row = []
            for a in party:
                theta, phi = (a, 0.0) if np.isscalar(a) else a
                row.append(qubit_observable(theta, phi))
            ms.append(row)
        scenario = Scenario(tuple((2,) * len(row) for row in ms))
        return cls(scenario, (2,) * len(ms), ms)


def behavior_from_quantum(state: DensityMatrix, ma: MeasurementAssignment) -> Behavior:
    """Born-rule table: ``p(a|x) = Tr(rho * kron_p P[p][x_p][a_p])``."""
    if state.dim != ma.total_dim:
        raise StructureError(f"state dimension {state.dim} != {ma.total_dim}")
    s = ma.scenario
    rho = state.entries

    def prob(xs, a):
        proj = reduce(np.kron, (ma.measurements[p][x].projectors[a[p]]
                                for p, x in enumerate(xs)))
        # Tr(rho P) without forming the product
        return float(np.einsum("ij,ji->", rho, proj).real)

    return Behavior.from_function(s, prob)


def singlet_state() -> DensityMatrix:
    """``(|01> - |10>)/sqrt(2)``."""
    return DensityMatrix.from_vector([0, 1, -1, 0])


def ghz_state(n: int = 3) -> DensityMatrix:
    """``(|0...0> + |1...1>)/sqrt(2)`` on ``n >= 3`` qubits."""
    if n < 3:
        raise ValueError(f"GHZ state needs n >= 3 qubits, got {n}")
    psi = np.zeros(2 ** n)
    psi[0] = psi[-1] = 1
    return DensityMatrix.from_vector(psi)


def maximally_mixed(dim: int) -> DensityMatrix:
    return DensityMatrix(np.eye(dim) / dim)


def random_pure_state(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Normalized complex Gaussian vector (Haar-distributed pure state)."""
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return DensityMatrix.from_vector(psi)


def partial_trace(state: DensityMatrix, dims: Sequence[int], keep: int) -> np.ndarray:
    """Reduced density matrix of subsystem ``keep``."""
    n = len(dims)
    rho = state.entries.reshape(tuple(dims) * 2)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for k in range(n):
        if k != keep:
            col[k] = row[k]
    return np.einsum("".join(row + col) + "->" + row[keep] + col[keep], rho)


def singlet_correlator(theta_a: float, theta_b: float, phi_a: float = 0.0,
                       phi_b: float = 0.0) -> float:
    """Singlet correlation for two spin directions, via the Born rule."""
    ma = MeasurementAssignment.qubits([[(theta_a, phi_a)], [(theta_b, phi_b)]])
    return correlator(behavior_from_quantum(singlet_state(), ma), 0)


# Settings that maximize the CHSH violation of the singlet (x-z plane).
CHSH_OPTIMAL_ANGLES = ((0.0, np.pi / 2), (np.pi / 4, -np.pi / 4))


def chsh_singlet_behavior(angles=CHSH_OPTIMAL_ANGLES) -> Behavior:
    return behavior_from_quantum(singlet_state(), MeasurementAssignment.qubits(angles))


def ghz_behavior(n: int = 3) -> Behavior:
    """Born-rule behavior of the n-qubit GHZ state with X/Y settings per party."""
    angles = (((np.pi / 2, 0.0), (np.pi / 2, np.pi / 2)),) * n
    return behavior_from_quantum(ghz_state(n), MeasurementAssignment.qubits(angles))
