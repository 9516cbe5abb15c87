import json

import numpy as np
import pytest

from lhvkit import (Behavior, Scenario, StochasticLocalModel, behavior_from_model,
                    correlator, is_product_behavior, make_pr_box, marginal,
                    no_signalling_check, validate_behavior)
from lhvkit.quantum import chsh_singlet_behavior, singlet_state, behavior_from_quantum, \
    MeasurementAssignment
from lhvkit.scenario import StructureError, UnsupportedSpectrumError, spin_value


def test_scenario_invariants():
    with pytest.raises(StructureError):
        Scenario(())
    with pytest.raises(StructureError):
        Scenario(((2, 1),))
    with pytest.raises(StructureError):
        Scenario(((2,), ()))


def test_canonical_order_chsh():
    s = Scenario.chsh()
    entries = list(s.entries())
    assert len(entries) == s.size == 16
    assert entries[0] == (0, (0, 0), (0, 0))
    assert entries[1] == (1, (0, 0), (0, 1))
    assert entries[2] == (2, (0, 0), (1, 0))
    assert entries[4] == (4, (0, 1), (0, 0))
    assert entries[15] == (15, (1, 1), (1, 1))
    assert s.joint_settings == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert s.local_slots == ((0, 0), (0, 1), (1, 0), (1, 1))


def test_mixed_outcome_counts_layout():
    s = Scenario(((2, 3), (2,)))
    assert s.joint_settings == ((0, 0), (1, 0))
    assert s.offsets == (0, 4, 10)
    b = Behavior.uniform(s)
    assert b.block((1, 0)).shape == (3, 2)
    assert validate_behavior(b).is_valid


def test_setting_index_accepts_tuple_or_int(chsh):
    assert chsh.setting_index((1, 0)) == 2
    assert chsh.setting_index(3) == 3
    with pytest.raises(StructureError):
        chsh.setting_index((2, 0))
    with pytest.raises(StructureError):
        chsh.setting_index(4)


def test_spin_value():
    assert spin_value(0) == 1 and spin_value(1) == -1
    with pytest.raises(UnsupportedSpectrumError):
        spin_value(0, 3)


def test_validate_uniform(chsh):
    rep = validate_behavior(Behavior(chsh, np.full(16, 0.25)))
    assert rep.is_valid
    assert rep.max_negativity == 0 and rep.max_normalization_error == 0


def test_validate_negative_entry(chsh):
    t = np.full(16, 0.25)
    t[0], t[1] = -0.01, 0.51
    rep = validate_behavior(Behavior(chsh, t))
    assert not rep.is_valid
    assert rep.max_negativity == pytest.approx(0.01, abs=1e-15)
    assert 0 in rep.offending_indices


def test_validate_normalization(chsh):
    t = np.full(16, 0.25)
    t[5] = 0.5
    rep = validate_behavior(Behavior(chsh, t))
    assert not rep.is_valid
    assert rep.max_normalization_error == pytest.approx(0.25)
    assert ("setting", 1) in rep.offending_indices


def test_dimension_mismatch(chsh):
    with pytest.raises(StructureError):
        Behavior(chsh, np.full(15, 0.25))


def test_singlet_behavior_valid_by_direct_summation():
    b = chsh_singlet_behavior()
    assert (b.table >= 0).all()
    for i in range(4):
        assert b.block(i).sum() == pytest.approx(1, abs=1e-14)
    assert validate_behavior(b).is_valid


def test_marginal_of_product(chsh):
    q = [np.array([0.3, 0.7]), np.array([0.9, 0.1])]
    r = [np.array([0.5, 0.5]), np.array([0.2, 0.8])]
    b = Behavior.from_function(chsh, lambda xs, a: q[xs[0]][a[0]] * r[xs[1]][a[1]])
    for xs in chsh.joint_settings:
        np.testing.assert_allclose(marginal(b, 0, xs), q[xs[0]], atol=1e-15)
        np.testing.assert_allclose(marginal(b, 1, xs), r[xs[1]], atol=1e-15)


def test_marginal_uniform_for_singlet_and_pr_box(chsh):
    for b in (chsh_singlet_behavior(), make_pr_box()):
        for xs in chsh.joint_settings:
            for p in (0, 1):
                np.testing.assert_allclose(marginal(b, p, xs), [0.5, 0.5], atol=1e-12)


def test_marginal_bad_party(chsh):
    with pytest.raises(StructureError):
        marginal(Behavior.uniform(chsh), 2, 0)


def test_crafted_signalling_table(chsh):
    # Alice outputs 0 when Bob picks y=0 and 1 when Bob picks y=1
    b = Behavior.from_function(chsh, lambda xs, a: float(a[0] == xs[1] and a[1] == 0))
    assert validate_behavior(b).is_valid
    rep = no_signalling_check(b)
    assert not rep.passes
    assert rep.max_deviation == 1.0
    assert rep.witness[0] == 0


def test_no_signalling_passes_for_pr_box():
    rep = no_signalling_check(make_pr_box())
    assert rep.passes and rep.max_deviation == 0 and rep.witness is None


def test_correlator_examples(chsh):
    all_plus = Behavior.from_function(chsh, lambda xs, a: float(a == (0, 0)))
    for i in range(4):
        assert correlator(all_plus, i) == 1
        assert correlator(Behavior.uniform(chsh), i) == 0
    ma = MeasurementAssignment.qubits([[0.3], [0.3]])
    assert correlator(behavior_from_quantum(singlet_state(), ma), 0) == pytest.approx(-1, abs=1e-12)


def test_correlator_needs_two_outcomes():
    s = Scenario(((3,), (2,)))
    with pytest.raises(UnsupportedSpectrumError):
        correlator(Behavior.uniform(s), 0)


def test_product_checks(chsh):
    assert is_product_behavior(Behavior.uniform(chsh))
    assert not is_product_behavior(chsh_singlet_behavior())
    m = StochasticLocalModel(chsh, [(1.0, [[[0.2, 0.8], [0.6, 0.4]], [[0.5, 0.5], [0.9, 0.1]]])])
    assert is_product_behavior(behavior_from_model(m))


def test_product_implies_correlator_factorizes(chsh, rng):
    for _ in range(20):
        resp = [[rng.dirichlet([1, 1]) for _ in range(2)] for _ in range(2)]
        b = behavior_from_model(StochasticLocalModel(chsh, [(1.0, resp)]))
        assert is_product_behavior(b)
        for xs in chsh.joint_settings:
            spins = [marginal(b, p, xs) @ [1, -1] for p in range(2)]
            assert correlator(b, xs) == pytest.approx(spins[0] * spins[1], abs=1e-9)


def test_marginals_sum_to_one(rng, tripartite):
    from lhvkit import random_model
    for _ in range(10):
        b = behavior_from_model(random_model(tripartite, rng))
        for xs in tripartite.joint_settings:
            for p in range(3):
                assert abs(marginal(b, p, xs).sum() - 1) <= 1e-12


def test_json_round_trip(chsh):
    b = chsh_singlet_behavior()
    obj = json.loads(b.dumps())
    assert obj["scenario"] == {"parties": [{"settings": [{"outcomes": 2}, {"outcomes": 2}]}] * 2}
    back = Behavior.from_json(obj)
    assert back.scenario == chsh
    np.testing.assert_array_equal(back.table, b.table)


def test_behavior_immutable(chsh):
    b = Behavior.uniform(chsh)
    with pytest.raises(ValueError):
        b.table[0] = 1.0
