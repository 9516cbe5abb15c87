"""Executable core of Bell's theorem: local models, polytope membership, quantum behaviors."""

from .lhv import (DeterministicStrategy, JointDistribution, StochasticLocalModel,
                  behavior_from_joint, behavior_from_model, enumerate_deterministic,
                  joint_from_model, make_pr_box, model_from_joint, random_joint,
                  random_local_behavior, random_model, vertex_matrix)
from .polytope import (BellFunctional, Certificate, FeasibilityResult, GHZReport,
                       chsh_functional, evaluate_functional, ghz_contradiction_check,
                       local_polytope_membership, maximize_functional_classical,
                       maximize_functional_stochastic, mermin_functional,
                       s_stochastic_max_chsh)
from .quantum import (DensityMatrix, MeasurementAssignment, ProjectiveMeasurement,
                      behavior_from_quantum, chsh_singlet_behavior, ghz_behavior,
                      ghz_state, qubit_observable, random_pure_state, singlet_correlator,
                      singlet_state)
from .scenario import (CONVENTION, Behavior, Scenario, ValidationReport, correlator,
                       is_product_behavior, marginal, no_signalling_check,
                       validate_behavior)

__version__ = "0.1.0"
