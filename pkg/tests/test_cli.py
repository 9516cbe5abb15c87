import json

import numpy as np
import pytest

from lhvkit import (Behavior, Scenario, behavior_from_model, chsh_singlet_behavior, make_pr_box,
                    random_model)
from lhvkit.cli import DEMOS, main
from lhvkit.scenario import CONVENTION


@pytest.fixture
def write(tmp_path):
    def _write(obj, name="in.json"):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)
    return _write


def run_json(capsys, argv):
    code = main(["--format", "json", *argv])
    return code, json.loads(capsys.readouterr().out)


def test_validate_exit_codes(write, capsys, chsh):
    code, rep = run_json(capsys, ["validate", write(Behavior.uniform(chsh).to_json())])
    assert code == 0 and rep["is_valid"] and rep["convention"] == CONVENTION

    t = np.full(16, 0.25)
    t[3], t[2] = -0.01, 0.26
    code, rep = run_json(capsys, ["validate", write(Behavior(chsh, t).to_json())])
    assert code == 1 and 3 in rep["offending_indices"]

    assert main(["validate", write("{not json")]) == 2
    assert "invalid JSON" in capsys.readouterr().err
    assert main(["validate", "/nonexistent/file.json"]) == 2


def test_nosignalling(write, capsys, chsh):
    b = Behavior.from_function(chsh, lambda xs, a: float(a[0] == xs[1] and a[1] == 0))
    code, rep = run_json(capsys, ["nosignalling", write(b.to_json())])
    assert code == 1 and rep["max_deviation"] == 1
    code, _ = run_json(capsys, ["nosignalling", write(make_pr_box().to_json())])
    assert code == 0


def test_membership_local_model(write, capsys, chsh):
    m = random_model(chsh, np.random.default_rng(3))
    code, rep = run_json(capsys, ["membership", write(m.to_json())])
    assert code == 0 and rep["status"] == "feasible"
    assert len(rep["joint"]) == 16


def test_membership_singlet_and_pr_box(write, capsys):
    code, rep = run_json(capsys, ["membership", write(chsh_singlet_behavior().to_json())])
    assert code == 1 and rep["certificate"]["margin"] == pytest.approx(2 * np.sqrt(2) - 2, abs=1e-9)
    code, rep = run_json(capsys, ["membership", write(make_pr_box().to_json())])
    assert code == 1 and rep["certificate"]["value"] == pytest.approx(4, abs=1e-9)


def test_membership_quantum_presets(write, capsys):
    code, rep = run_json(capsys, ["membership", write({"quantum": {"state": "singlet"}})])
    assert code == 1
    code, rep = run_json(capsys, ["membership", write({"quantum": {"state": "ghz3"}})])
    assert code == 1 and rep["certificate"]["value"] == pytest.approx(4, abs=1e-9)
    angles = [[0.0, 0.0], [0.0, 0.0]]
    code, rep = run_json(capsys, ["membership",
                                  write({"quantum": {"state": "singlet", "angles": angles}})])
    assert code == 0
    assert main(["membership", write({"quantum": {"state": "bogus"}})]) == 2


def test_membership_rejects_invalid_behavior(write, capsys, chsh):
    assert main(["membership", write(Behavior(chsh, np.full(16, 0.3)).to_json())]) == 2


def test_emitted_joint_round_trips(write, capsys, chsh):
    b = behavior_from_model(random_model(chsh, np.random.default_rng(5)))
    _, rep = run_json(capsys, ["membership", write(b.to_json(), "b.json")])
    joint_path = write(rep, "joint.json")
    code, again = run_json(capsys, ["validate", joint_path])
    assert code == 0 and again["is_valid"]
    code, again = run_json(capsys, ["membership", joint_path])
    assert code == 0 and again["status"] == "feasible"


def test_maximize(write, capsys):
    code, rep = run_json(capsys, ["maximize", "chsh"])
    assert code == 0 and rep["classical_max"] == 2 and rep["argmax"] == [[0, 0], [0, 0]]
    code, rep = run_json(capsys, ["maximize", "mermin"])
    assert rep["classical_max"] == 2
    code, rep = run_json(capsys, ["maximize", "chsh", "--behavior",
                                  write(make_pr_box().to_json())])
    assert code == 1 and rep["violated"] and rep["value"] == 4


def test_sbound(capsys):
    code, rep = run_json(capsys, ["sbound", "--s", "0", "0.1", "0.25"])
    assert code == 0 and rep["matches_closed_form"]
    assert rep["s=0.25"]["corner_max"] == pytest.approx(0.5, abs=1e-12)
    assert main(["sbound", "--s", "0.5"]) == 2


def test_ghz(capsys):
    code, rep = run_json(capsys, ["ghz"])
    assert code == 0
    assert rep["parity_product"] == 1 and rep["required_parity"] == -1
    assert rep["lp_status"] == "infeasible"


@pytest.mark.parametrize("name", DEMOS)
def test_demos_pass(capsys, name):
    code, rep = run_json(capsys, ["demo", name])
    assert code == 0 and rep["passed"] and rep["demo"] == name


def test_text_format_precision(capsys):
    assert main(["demo", "chsh-quantum"]) == 0
    out = capsys.readouterr().out
    assert "abs_value: 2.82842712475\n" in out
    assert f"convention: {CONVENTION}" in out


def test_flags_after_subcommand(capsys):
    assert main(["ghz", "--format", "json", "--tol", "1e-8"]) == 0
    json.loads(capsys.readouterr().out)


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["demo", "nope"]) == 2
    assert main(["--tol", "-1", "ghz"]) == 2
