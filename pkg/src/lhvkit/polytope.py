"""Local-polytope membership, classical and stochastic bounds, GHZ check."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .lhv import (DeterministicStrategy, JointDistribution, StochasticLocalModel,
                  behavior_from_model, enumerate_deterministic,
                  strategy_count, vertex_matrix)
from .quantum import ghz_behavior
from .scenario import (DEFAULT_TOL, Behavior, Scenario, StructureError,
                       UnsupportedSpectrumError)
from .simplex import MAX_COLUMNS, LPNumericError, LPSizeError, solve_lp

# certificates are rescaled so their deterministic maximum equals the CHSH bound
CERTIFICATE_BOUND = 2.0


@dataclass(frozen=True)
class BellFunctional:
    """Linear functional on behaviors; coefficients in the behavior's canonical order."""

    scenario: Scenario
    coefficients: np.ndarray = field(repr=False)
    name: str | None = None

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float).ravel()
        if c.shape != (self.scenario.size,):
            raise StructureError(
                f"{c.size} coefficients, scenario needs {self.scenario.size}")
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_correlators(cls, scenario: Scenario, terms: Mapping[tuple, float],
                        name: str | None = None) -> BellFunctional:
        """``sum coef * E(settings)``, written out in probability space."""
        coefs = np.zeros(scenario.size)
        for xs, w in terms.items():
            i = scenario.setting_index(xs)
            shape = scenario.block_shape(scenario.joint_settings[i])
            if any(k != 2 for k in shape):
                raise UnsupportedSpectrumError("correlator terms need 2 outcomes")
            for k, a in enumerate(itertools.product((0, 1), repeat=len(shape))):
                coefs[scenario.offsets[i] + k] += w * (-1) ** sum(a)
        return cls(scenario, coefs, name)

    def to_json(self) -> dict:
        return {"scenario": self.scenario.to_json(), "name": self.name,
                "coefficients": self.coefficients.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> BellFunctional:
        return cls(Scenario.from_json(obj["scenario"]), obj["coefficients"], obj.get("name"))


def evaluate_functional(f: BellFunctional, b: Behavior) -> float:
    if f.scenario != b.scenario:
        raise StructureError("functional and behavior live on different scenarios")
    return float(f.coefficients @ b.table)


def chsh_functional() -> BellFunctional:
    """``E(0,0) + E(0,1) + E(1,0) - E(1,1)``."""
    return BellFunctional.from_correlators(
        Scenario.chsh(), {(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): -1}, "CHSH")


def mermin_functional() -> BellFunctional:
    """``E(XXX) - E(XYY) - E(YXY) - E(YYX)`` with setting 0 = X, 1 = Y."""
    return BellFunctional.from_correlators(
        Scenario.uniform(3), {(0, 0, 0): 1, (0, 1, 1): -1, (1, 0, 1): -1, (1, 1, 0): -1},
        "Mermin")


@dataclass(frozen=True)
class ClassicalMaximum:
    value: float
    argmax: DeterministicStrategy


def maximize_functional_classical(f: BellFunctional) -> ClassicalMaximum:
    """Exact maximum over deterministic strategies; first maximizer in canonical order wins.

    Integer-valued coefficients are summed in integer arithmetic.
    """
    verts = vertex_matrix(f.scenario)
    c = f.coefficients
    if np.all(c == np.round(c)) and np.abs(c).max(initial=0) < 2 ** 52:
        values = c.astype(np.int64) @ verts.astype(np.int64)
    else:
        values = c @ verts
    k = int(np.argmax(values))
    strategy = next(itertools.islice(enumerate_deterministic(f.scenario), k, None))
    return ClassicalMaximum(float(values[k]), strategy)


@dataclass(frozen=True)
class Certificate:
    """A Bell inequality separating the queried behavior from the local polytope."""

    functional: BellFunctional
    classical_max: float
    value: float

    @property
    def margin(self) -> float:
        return self.value - self.classical_max

    def to_json(self) -> dict:
        return {"coefficients": self.functional.coefficients.tolist(),
                "classical_max": self.classical_max, "value": self.value,
                "margin": self.margin}


@dataclass(frozen=True)
class FeasibilityResult:
    status: str  # "feasible" | "infeasible"
    joint: JointDistribution | None = None
    certificate: Certificate | None = None
    # phase-1 L1 residual of the membership LP
    residual: float = 0.0
    # largest mixing weight w keeping w*p + (1-w)*uniform local (infeasible case)
    visibility: float | None = None

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def to_json(self) -> dict:
        out: dict = {"status": self.status}
        if self.joint is not None:
            out["scenario"] = self.joint.scenario.to_json()
            out["joint"] = self.joint.flat.tolist()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
            out["visibility"] = self.visibility
        return out


def _membership_system(b: Behavior):
    verts = vertex_matrix(b.scenario)
    A = np.vstack([verts, np.ones(verts.shape[1])])
    rhs = np.concatenate([b.table, [1.0]])
    return verts, A, rhs


def local_polytope_membership(b: Behavior, tol: float = DEFAULT_TOL) -> FeasibilityResult:
    """Decide whether ``b`` is a mixture of deterministic strategies.

    Feasible: the mixture weights are returned as a joint distribution over
    full assignments.  Infeasible: a separating Bell functional is returned,
    shifted to vanish on the uniform behavior and scaled so its maximum over
    deterministic strategies is 2; its value on ``b`` is then ``2 / w`` where
    ``w`` is the critical weight of ``b`` against uniform noise.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = b.scenario
    if strategy_count(s) > MAX_COLUMNS:
        raise LPSizeError(f"{strategy_count(s)} LP variables exceeds the limit {MAX_COLUMNS}")
    verts, A, rhs = _membership_system(b)
    n = verts.shape[1]
    res = solve_lp(np.zeros(n), A, rhs, feas_tol=tol)
    if res.status == "optimal":
        q = np.maximum(res.x, 0.0)
        q /= q.sum()
        return FeasibilityResult("feasible", JointDistribution(s, q), residual=res.phase1_residual)
    if res.status != "infeasible":
        raise LPNumericError(f"unexpected membership LP status {res.status!r}")

    w, coefs = _noise_robustness(b, verts)
    if w is None:
        # fall back to the raw Farkas vector of the phase-1 problem
        coefs = res.farkas[:-1]
    cert = _normalized_certificate(s, coefs, verts, b)
    if cert.margin <= 0:
        raise LPNumericError("certificate does not separate the behavior")
    return FeasibilityResult("infeasible", certificate=cert, residual=res.phase1_residual,
                             visibility=w)


def _noise_robustness(b: Behavior, verts: np.ndarray):
    """Maximize w with ``w*b + (1-w)*uniform`` in the local polytope.

    Returns ``(w, functional coefficients)`` from the LP dual, or ``(None, None)``
    if the LP does not reach an optimum.
    """
    u = Behavior.uniform(b.scenario).table
    n = verts.shape[1]
    A = np.vstack([np.hstack([verts, -(b.table - u)[:, None]]),
                   np.concatenate([np.ones(n), [0.0]])])
    rhs = np.concatenate([u, [1.0]])
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    res = solve_lp(cost, A, rhs)
    if res.status != "optimal":
        return None, None
    # dual feasibility: y_b . (b - u) >= 1 and y_b . v + y_last <= 0 for every vertex
    return float(res.x[-1]), res.dual[:-1]


def _normalized_certificate(s: Scenario, coefs, verts, b: Behavior) -> Certificate:
    coefs = np.asarray(coefs, dtype=float)
    u = Behavior.uniform(s).table
    # adding a constant to every entry of one joint setting's block shifts every
    # normalized behavior by that constant; spread the shift across settings
    coefs = coefs - (coefs @ u) / len(s.joint_settings)
    cmax = float((coefs @ verts).max())
    if cmax > 1e-9:
        coefs = coefs * (CERTIFICATE_BOUND / cmax)
    else:
        coefs = coefs / np.abs(coefs).max()
    f = BellFunctional(s, coefs, "certificate")
    return Certificate(f, float((coefs @ verts).max()), evaluate_functional(f, b))


def s_stochastic_max_chsh(s: float) -> float:
    """Supremum of CHSH over local models with responses in ``[s, 1 - s]``.

    Each local expectation ``I = p(+1) - p(-1)`` ranges over ``[-(1-2s), 1-2s]``
    and CHSH is multilinear in the four expectations, so the maximum sits at a
    corner of that box.  The corners are enumerated directly.
    """
    if not 0 <= s < 0.5:
        raise ValueError(f"s must lie in [0, 1/2), got {s}")
    r = 1.0 - 2.0 * s
    best = -np.inf
    for ax, ax2, by, by2 in itertools.product((-r, r), repeat=4):
        best = max(best, ax * by + ax * by2 + ax2 * by - ax2 * by2)
    return float(best)


def maximize_functional_stochastic(f: BellFunctional, s: float) -> float:
    """Maximum of ``f`` over local models whose responses lie in ``[s, 1 - s]``.

    Works for any two-outcome scenario by enumerating corner response profiles
    (one single-component model per corner); mixtures over components cannot
    exceed the best corner.
    """
    if not 0 <= s < 0.5:
        raise ValueError(f"s must lie in [0, 1/2), got {s}")
    sc = f.scenario
    if any(k != 2 for party in sc.outcomes for k in party):
        raise UnsupportedSpectrumError("stochastic bound needs 2 outcomes everywhere")
    lo, hi = np.array([1 - s, s]), np.array([s, 1 - s])
    best = -np.inf
    for corner in itertools.product((lo, hi), repeat=len(sc.local_slots)):
        it = iter(corner)
        responses = [[next(it) for _ in range(m)] for m in sc.settings_per_party]
        m = StochasticLocalModel(sc, [(1.0, responses)])
        best = max(best, evaluate_functional(f, behavior_from_model(m)))
    return float(best)


GHZ_CONSTRAINTS = {(0, 0, 0): 1, (0, 1, 1): -1, (1, 0, 1): -1, (1, 1, 0): -1}


@dataclass(frozen=True)
class GHZReport:
    deterministic_consistent: bool
    strategies_checked: int
    # products of the four constrained spin products, over all strategies
    parity_products: frozenset
    required_parity: int
    lp_status: FeasibilityResult
    mermin_quantum: float
    mermin_classical: float

    @property
    def parity_product(self) -> int:
        (p,) = self.parity_products
        return p

    def to_json(self) -> dict:
        return {"deterministic_consistent": self.deterministic_consistent,
                "strategies_checked": self.strategies_checked,
                "parity_product": self.parity_product,
                "required_parity": self.required_parity,
                "mermin_quantum": self.mermin_quantum,
                "mermin_classical": self.mermin_classical,
                "lp": self.lp_status.to_json()}


def ghz_contradiction_check(tol: float = DEFAULT_TOL) -> GHZReport:
    """Brute-force, parity and LP views of the three-party GHZ argument."""
    sc = Scenario.uniform(3)
    consistent = False
    parities = set()
    count = 0
    for strat in enumerate_deterministic(sc):
        spins = strat.spins()
        count += 1
        products = {xs: spins[0][xs[0]] * spins[1][xs[1]] * spins[2][xs[2]]
                    for xs in GHZ_CONSTRAINTS}
        consistent |= all(products[xs] == v for xs, v in GHZ_CONSTRAINTS.items())
        parities.add(int(np.prod(list(products.values()))))
    required = int(np.prod(list(GHZ_CONSTRAINTS.values())))
    b = ghz_behavior(3)
    mermin = mermin_functional()
    return GHZReport(consistent, count, frozenset(parities), required,
                     local_polytope_membership(b, tol), evaluate_functional(mermin, b),
                     maximize_functional_classical(mermin).value)
