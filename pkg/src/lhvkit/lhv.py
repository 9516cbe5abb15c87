"""Local hidden-variable models and joint distributions.

A :class:`StochasticLocalModel` is a finite mixture over a hidden variable:
each component carries a weight and, for every (party, setting), a response
distribution over outcomes.  A :class:`JointDistribution` assigns a probability
to every *full assignment*, one outcome for each (party, setting) at once.

Full assignments are ordered like :attr:`Scenario.local_slots` (party-major,
then setting), first slot most significant.  Deterministic strategies use the
same order, so strategy ``i`` of :func:`enumerate_deterministic` is the full
assignment at flat index ``i`` of a joint table.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .scenario import Behavior, Scenario, StructureError

MAX_STRATEGIES = 10 ** 7


class EnumerationOverflowError(ValueError):
    pass


@dataclass(frozen=True)
class DeterministicStrategy:
    """One outcome for every (party, setting): ``assignment[p][x]``."""

    scenario: Scenario
    assignment: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        a = tuple(tuple(int(v) for v in party) for party in self.assignment)
        if tuple(len(party) for party in a) != self.scenario.settings_per_party:
            raise StructureError("assignment shape does not match scenario")
        for p, party in enumerate(a):
            for x, v in enumerate(party):
                if not 0 <= v < self.scenario.outcomes[p][x]:
                    raise StructureError(f"outcome {v} out of range at ({p}, {x})")
        object.__setattr__(self, "assignment", a)

    @property
    def flat(self) -> tuple[int, ...]:
        return tuple(v for party in self.assignment for v in party)

    def behavior(self) -> Behavior:
        return Behavior.from_function(
            self.scenario,
            lambda xs, a: float(all(self.assignment[p][x] == a[p] for p, x in enumerate(xs))))

    def spins(self) -> tuple[tuple[int, ...], ...]:
        """``+1/-1`` view of the assignment (two-outcome settings only)."""
        return tuple(tuple(1 - 2 * v for v in party) for party in self.assignment)


def strategy_count(s: Scenario) -> int:
    return int(np.prod(s.joint_shape, dtype=object))


def enumerate_deterministic(s: Scenario) -> Iterator[DeterministicStrategy]:
    """All deterministic strategies in canonical order."""
    if strategy_count(s) > MAX_STRATEGIES:
        raise EnumerationOverflowError(
            f"{strategy_count(s)} strategies exceeds the limit {MAX_STRATEGIES}")
    sizes = s.settings_per_party
    for flat in itertools.product(*(range(k) for k in s.joint_shape)):
        assignment, i = [], 0
        for m in sizes:
            assignment.append(flat[i:i + m])
            i += m
        yield DeterministicStrategy(s, tuple(assignment))


def vertex_matrix(s: Scenario) -> np.ndarray:
    """Columns are the behaviors of the deterministic strategies, canonical order.

    Column ``i`` has a 1 at the entry of each joint setting that strategy ``i``
    produces and 0 elsewhere.
    """
    if strategy_count(s) > MAX_STRATEGIES:
        raise EnumerationOverflowError(f"{strategy_count(s)} strategies")
    n = strategy_count(s)
    full = np.arange(n).reshape(s.joint_shape)
    slot_axes = {slot: ax for ax, slot in enumerate(s.local_slots)}
    m = np.zeros((s.size, n))
    for i, xs in enumerate(s.joint_settings):
        axes = [slot_axes[(p, x)] for p, x in enumerate(xs)]
        # strategy index grid -> block index of the outcome tuple it produces
        moved = np.moveaxis(full, axes, range(len(axes)))
        block_shape = moved.shape[:len(axes)]
        grouped = moved.reshape(int(np.prod(block_shape)), -1)
        for k, strategies in enumerate(grouped):
            m[s.offsets[i] + k, strategies] = 1.0
    return m


def _check_distribution(v, what: str, tol: float = 1e-12) -> np.ndarray:
    v = np.array(v, dtype=float)
    if (v < -tol).any():
        raise ValueError(f"{what}: negative entry")
    if abs(v.sum() - 1) > tol:
        raise ValueError(f"{what}: sums to {v.sum()}, expected 1")
    return v


@dataclass(frozen=True)
class ModelComponent:
    weight: float
    # responses[p][x] is the outcome distribution of party p for setting x
    responses: tuple[tuple[np.ndarray, ...], ...] = field(repr=False)


@dataclass(frozen=True)
class StochasticLocalModel:
    scenario: Scenario
    components: tuple[ModelComponent, ...]

    def __post_init__(self):
        s = self.scenario
        comps = []
        for c, comp in enumerate(self.components):
            if isinstance(comp, ModelComponent):
                w, responses = comp.weight, comp.responses
            else:
                w, responses = comp
            if not w > 0:
                raise ValueError(f"component {c}: weight must be > 0, got {w}")
            if len(responses) != s.parties:
                raise StructureError(f"component {c}: wrong number of parties")
            rs = []
            for p, party in enumerate(responses):
                if len(party) != s.settings_per_party[p]:
                    raise StructureError(f"component {c} party {p}: wrong number of settings")
                row = []
                for x, r in enumerate(party):
                    r = _check_distribution(r, f"component {c} response ({p}, {x})")
                    if r.shape != (s.outcomes[p][x],):
                        raise StructureError(f"component {c} response ({p}, {x}): wrong length")
                    r.flags.writeable = False
                    row.append(r)
                rs.append(tuple(row))
            comps.append(ModelComponent(float(w), tuple(rs)))
        if not comps:
            raise ValueError("model needs at least one component")
        _check_distribution([c.weight for c in comps], "weights")
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def from_strategies(cls, weighted: Sequence[tuple[float, DeterministicStrategy]]):
        if not weighted:
            raise ValueError("no strategies")
        s = weighted[0][1].scenario
        comps = []
        for w, strat in weighted:
            comps.append((w, [[np.eye(s.outcomes[p][x])[v] for x, v in enumerate(party)]
                              for p, party in enumerate(strat.assignment)]))
        return cls(s, comps)

    def to_json(self) -> dict:
        return {"scenario": self.scenario.to_json(),
                "components": [{"weight": c.weight,
                                "responses": [[r.tolist() for r in party]
                                              for party in c.responses]}
                               for c in self.components]}

    @classmethod
    def from_json(cls, obj: dict) -> StochasticLocalModel:
        comps = obj["components"]
        if "scenario" in obj:
            s = Scenario.from_json(obj["scenario"])
        else:
            s = Scenario(tuple(tuple(len(r) for r in party) for party in comps[0]["responses"]))
        return cls(s, [(c["weight"], c["responses"]) for c in comps])


@dataclass(frozen=True)
class JointDistribution:
    """Probability over full assignments; ``table`` has shape ``scenario.joint_shape``."""

    scenario: Scenario
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.array(self.table, dtype=float)
        if t.size != strategy_count(self.scenario):
            raise StructureError(
                f"joint table has {t.size} entries, expected {strategy_count(self.scenario)}")
        t = t.reshape(self.scenario.joint_shape)
        _check_distribution(t.ravel(), "joint distribution")
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    @property
    def flat(self) -> np.ndarray:
        return self.table.ravel()

    def to_json(self) -> dict:
        return {"scenario": self.scenario.to_json(), "joint": self.flat.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> JointDistribution:
        return cls(Scenario.from_json(obj["scenario"]), obj["joint"])


def behavior_from_model(m: StochasticLocalModel) -> Behavior:
    """``p(a|x) = sum_lambda w(lambda) prod_p p(a_p | x_p, lambda)``."""
    s = m.scenario
    table = np.zeros(s.size)
    for comp in m.components:
        parts = []
        for xs in s.joint_settings:
            block = np.array(comp.weight)
            for p, x in enumerate(xs):
                block = np.multiply.outer(block, comp.responses[p][x])
            parts.append(block.ravel())
        table += np.concatenate(parts)
    return Behavior(s, table)


def joint_from_model(m: StochasticLocalModel) -> JointDistribution:
    """Product of every response of a component, one factor per (party, setting), mixed over components."""
    s = m.scenario
    table = np.zeros(s.joint_shape)
    for comp in m.components:
        t = np.array(comp.weight)
        for p, x in s.local_slots:
            t = np.multiply.outer(t, comp.responses[p][x])
        table += t
    return JointDistribution(s, table)


def behavior_from_joint(j: JointDistribution) -> Behavior:
    """Marginalize the unmeasured (party, setting) slots for every joint setting."""
    s = j.scenario
    slot_axes = {slot: ax for ax, slot in enumerate(s.local_slots)}
    parts = []
    for xs in s.joint_settings:
        keep = [slot_axes[(p, x)] for p, x in enumerate(xs)]
        drop = tuple(ax for ax in range(j.table.ndim) if ax not in keep)
        # keep is increasing, so the surviving axes are already in party order
        parts.append(j.table.sum(axis=drop).ravel())
    return Behavior(s, np.concatenate(parts))


def model_from_joint(j: JointDistribution) -> StochasticLocalModel:
    """One deterministic component per full assignment with nonzero probability."""
    strategies = list(enumerate_deterministic(j.scenario))
    flat = j.flat
    weighted = [(float(flat[i]), strategies[i]) for i in np.flatnonzero(flat > 0)]
    return StochasticLocalModel.from_strategies(weighted)


def make_pr_box() -> Behavior:
    """Popescu-Rohrlich box: ``p(a,b|x,y) = 1/2`` iff ``a xor b = x*y``."""
    return Behavior.from_function(
        Scenario.chsh(), lambda xs, a: 0.5 if (a[0] ^ a[1]) == xs[0] * xs[1] else 0.0)


def random_model(s: Scenario, rng: np.random.Generator, max_components: int = 8
                 ) -> StochasticLocalModel:
    """1..max_components components, flat-Dirichlet weights and responses."""
    n = int(rng.integers(1, max_components + 1))
    weights = rng.dirichlet(np.ones(n))
    comps = []
    for w in weights:
        comps.append((w, [[rng.dirichlet(np.ones(k)) for k in party] for party in s.outcomes]))
    return StochasticLocalModel(s, comps)


def random_joint(s: Scenario, rng: np.random.Generator) -> JointDistribution:
    return JointDistribution(s, rng.dirichlet(np.ones(strategy_count(s))))


def random_local_behavior(s: Scenario, rng: np.random.Generator, n_vertices: int = 5
                          ) -> Behavior:
    """Random convex mixture of ``n_vertices`` deterministic-strategy behaviors."""
    verts = vertex_matrix(s)
    idx = rng.choice(verts.shape[1], size=n_vertices)
    return Behavior(s, verts[:, idx] @ rng.dirichlet(np.ones(n_vertices)))
