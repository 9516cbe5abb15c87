"""Bell scenarios and behaviors (conditional probability tables).

Canonical order
---------------
Joint settings are enumerated party-major lexicographically: party 0 is the
most significant digit.  Within one joint setting the outcome tuples are
enumerated the same way.  The flat probability table of a :class:`Behavior`
is the concatenation of the per-setting blocks in joint-setting order.

For the 2x2x2 (CHSH) scenario the 16 entries are::

    index  (x, y)  (a, b)
      0    (0, 0)  (0, 0)
      1    (0, 0)  (0, 1)
      2    (0, 0)  (1, 0)
      3    (0, 0)  (1, 1)
      4    (0, 1)  (0, 0)
     ...
     15    (1, 1)  (1, 1)

Outcome labels are integers ``0..k-1``.  For two-outcome settings the spin
view maps ``0 -> +1`` and ``1 -> -1``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

CONVENTION = "party-major-lex/v1"
DEFAULT_TOL = 1e-9


class StructureError(ValueError):
    """Shapes or indices inconsistent with the scenario."""


class UnsupportedSpectrumError(ValueError):
    """A spin (+1/-1) quantity was requested for a setting without 2 outcomes."""


def spin_value(outcome: int, n_outcomes: int = 2) -> int:
    if n_outcomes != 2:
        raise UnsupportedSpectrumError(
            f"spin value needs exactly 2 outcomes, got {n_outcomes}")
    if outcome not in (0, 1):
        raise StructureError(f"outcome {outcome} out of range")
    return 1 - 2 * outcome


@dataclass(frozen=True)
class Scenario:
    """Index space of a Bell experiment.

    ``outcomes[p][x]`` is the number of outcomes of setting ``x`` of party ``p``.
    """

    outcomes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        outs = tuple(tuple(int(k) for k in party) for party in self.outcomes)
        object.__setattr__(self, "outcomes", outs)
        if len(outs) < 1:
            raise StructureError("a scenario needs at least one party")
        for p, party in enumerate(outs):
            if len(party) < 1:
                raise StructureError(f"party {p} has no settings")
            if any(k < 2 for k in party):
                raise StructureError(f"party {p}: every setting needs >= 2 outcomes")

    @classmethod
    def uniform(cls, parties: int, settings: int = 2, outcomes: int = 2) -> Scenario:
        return cls(tuple((outcomes,) * settings for _ in range(parties)))

    @classmethod
    def chsh(cls) -> Scenario:
        return cls.uniform(2, 2, 2)

    @property
    def parties(self) -> int:
        return len(self.outcomes)

    @property
    def settings_per_party(self) -> tuple[int, ...]:
        return tuple(len(party) for party in self.outcomes)

    @cached_property
    def joint_settings(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product(*(range(m) for m in self.settings_per_party)))

    def block_shape(self, settings: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.outcomes[p][x] for p, x in enumerate(settings))

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        offs = [0]
        for xs in self.joint_settings:
            offs.append(offs[-1] + int(np.prod(self.block_shape(xs))))
        return tuple(offs)

    @property
    def size(self) -> int:
        """Length of the flat behavior table."""
        return self.offsets[-1]

    @cached_property
    def local_slots(self) -> tuple[tuple[int, int], ...]:
        """Every (party, setting) pair in canonical order."""
        return tuple((p, x) for p, m in enumerate(self.settings_per_party)
                     for x in range(m))

    @property
    def joint_shape(self) -> tuple[int, ...]:
        """Shape of a joint distribution over all (party, setting) outcomes."""
        return tuple(self.outcomes[p][x] for p, x in self.local_slots)

    def setting_index(self, settings) -> int:
        """Normalize a joint setting given as an index or a tuple to its index."""
        if isinstance(settings, (int, np.integer)):
            i = int(settings)
            if not 0 <= i < len(self.joint_settings):
                raise StructureError(f"joint setting index {i} out of range")
            return i
        xs = tuple(int(x) for x in settings)
        if len(xs) != self.parties or any(
                not 0 <= x < m for x, m in zip(xs, self.settings_per_party)):
            raise StructureError(f"joint setting {xs} out of range")
        i = 0
        for x, m in zip(xs, self.settings_per_party):
            i = i * m + x
        return i

    def entries(self):
        """Yield ``(flat_index, settings, outcomes)`` in canonical order."""
        i = 0
        for xs in self.joint_settings:
            for a in itertools.product(*(range(k) for k in self.block_shape(xs))):
                yield i, xs, a
                i += 1

    def to_json(self) -> dict:
        return {"parties": [{"settings": [{"outcomes": k} for k in party]}
                            for party in self.outcomes]}

    @classmethod
    def from_json(cls, obj: dict) -> Scenario:
        try:
            return cls(tuple(tuple(s["outcomes"] for s in party["settings"])
                             for party in obj["parties"]))
        except (KeyError, TypeError) as exc:
            raise StructureError(f"malformed scenario: {exc}") from exc


@dataclass(frozen=True)
class Behavior:
    """Conditional probability table ``p(outcomes | settings)``, flat, canonical order."""

    scenario: Scenario
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.array(self.table, dtype=float).ravel()
        if t.shape != (self.scenario.size,):
            raise StructureError(
                f"table has {t.size} entries, scenario needs {self.scenario.size}")
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    def block(self, settings) -> np.ndarray:
        """Probabilities for one joint setting as an array indexed by outcomes."""
        s = self.scenario
        i = s.setting_index(settings)
        return self.table[s.offsets[i]:s.offsets[i + 1]].reshape(
            s.block_shape(s.joint_settings[i]))

    def __getitem__(self, key):
        settings, outcomes = key
        return float(self.block(settings)[tuple(outcomes)])

    @classmethod
    def from_function(cls, scenario: Scenario, fn) -> Behavior:
        """Build from ``fn(settings, outcomes) -> probability``."""
        return cls(scenario, [fn(xs, a) for _, xs, a in scenario.entries()])

    @classmethod
    def uniform(cls, scenario: Scenario) -> Behavior:
        return cls.from_function(
            scenario, lambda xs, a: 1.0 / np.prod(scenario.block_shape(xs)))

    def mix(self, other: Behavior, weight: float) -> Behavior:
        """``weight * self + (1 - weight) * other``."""
        if other.scenario != self.scenario:
            raise StructureError("scenarios differ")
        return Behavior(self.scenario, weight * self.table + (1 - weight) * other.table)

    def to_json(self) -> dict:
        return {"scenario": self.scenario.to_json(),
                "probabilities": [float(v) for v in self.table]}

    @classmethod
    def from_json(cls, obj: dict) -> Behavior:
        try:
            return cls(Scenario.from_json(obj["scenario"]), obj["probabilities"])
        except KeyError as exc:
            raise StructureError(f"missing key {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class ValidationReport:
    is_valid: bool
    max_negativity: float
    max_normalization_error: float
    offending_indices: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"is_valid": self.is_valid,
                "max_negativity": self.max_negativity,
                "max_normalization_error": self.max_normalization_error,
                "offending_indices": self.offending_indices}


def validate_behavior(b: Behavior, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check nonnegativity and per-setting normalization.

    ``offending_indices`` holds flat indices of negative entries and
    ``("setting", i)`` pairs for badly normalized joint settings.
    """
    s = b.scenario
    if b.table.shape != (s.size,):
        raise StructureError("table does not match scenario")
    neg = np.maximum(-b.table, 0.0)
    max_neg = float(neg.max(initial=0.0))
    offending: list = [int(i) for i in np.flatnonzero(neg > tol)]
    max_norm = 0.0
    for i in range(len(s.joint_settings)):
        err = abs(float(b.table[s.offsets[i]:s.offsets[i + 1]].sum()) - 1.0)
        max_norm = max(max_norm, err)
        if err > tol:
            offending.append(("setting", i))
    return ValidationReport(max_neg <= tol and max_norm <= tol, max_neg, max_norm,
                            offending)


def _party_marginal(block: np.ndarray, party: int) -> np.ndarray:
    others = tuple(ax for ax in range(block.ndim) if ax != party)
    return block.sum(axis=others)


def marginal(b: Behavior, party: int, joint_setting) -> np.ndarray:
    """Outcome distribution of ``party`` under one joint setting."""
    if not 0 <= party < b.scenario.parties:
        raise StructureError(f"party {party} out of range")
    return _party_marginal(b.block(joint_setting), party)


@dataclass(frozen=True)
class NoSignallingReport:
    passes: bool
    max_deviation: float
    # (party, joint setting index, joint setting index) of the worst deviation
    witness: tuple | None

    def to_json(self) -> dict:
        return {"passes": self.passes, "max_deviation": self.max_deviation,
                "witness": list(self.witness) if self.witness else None}


def no_signalling_check(b: Behavior, tol: float = DEFAULT_TOL) -> NoSignallingReport:
    """Compare each party's marginals across all choices of the other parties' settings."""
    s = b.scenario
    worst, witness = 0.0, None
    for p in range(s.parties):
        groups: dict[int, list[int]] = {}
        for i, xs in enumerate(s.joint_settings):
            groups.setdefault(xs[p], []).append(i)
        for idx in groups.values():
            ref = marginal(b, p, idx[0])
            for j in idx[1:]:
                dev = float(np.abs(marginal(b, p, j) - ref).max())
                if dev > worst:
                    worst, witness = dev, (p, idx[0], j)
    return NoSignallingReport(worst <= tol, worst, witness if worst > tol else None)


def correlator(b: Behavior, joint_setting) -> float:
    """Full correlation ``E = sum (product of spins) * p`` for two-outcome settings."""
    block = b.block(joint_setting)
    if any(k != 2 for k in block.shape):
        raise UnsupportedSpectrumError(
            f"correlator needs 2 outcomes per setting, got {block.shape}")
    signs = np.array([1.0, -1.0])
    for _ in range(block.ndim):
        block = np.tensordot(block, signs, axes=([0], [0]))
    return float(block)


def is_product_behavior(b: Behavior, tol: float = DEFAULT_TOL) -> bool:
    for i in range(len(b.scenario.joint_settings)):
        block = b.block(i)
        prod = np.array(1.0)
        for p in range(block.ndim):
            prod = np.multiply.outer(prod, _party_marginal(block, p))
        if np.abs(prod - block).max() > tol:
            return False
    return True
