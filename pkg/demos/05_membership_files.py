"""
Membership from JSON files
==========================

Behaviors travel as JSON in the canonical flat order.  This script writes a
few files to a temporary directory and runs the command-line front end on
them, the same way a shell user would.
"""

# %%
import json
import tempfile
from pathlib import Path

import numpy as np

from lhvkit import (Behavior, Scenario, behavior_from_model, local_polytope_membership,
                    make_pr_box, random_model)
from lhvkit.cli import main

tmp = Path(tempfile.mkdtemp())
chsh = Scenario.chsh()
pr, uniform = make_pr_box(), Behavior.uniform(chsh)

files = {
    "local.json": behavior_from_model(random_model(chsh, np.random.default_rng(1))).to_json(),
    "pr_box.json": pr.to_json(),
    "noisy_pr_0.6.json": pr.mix(uniform, 0.6).to_json(),
    "noisy_pr_0.8.json": pr.mix(uniform, 0.8).to_json(),
    "singlet.json": {"quantum": {"state": "singlet"}},
}
for name, obj in files.items():
    (tmp / name).write_text(json.dumps(obj))

# %%
# Exit code 0 means a local model exists, 1 means a certificate was found.
for name in files:
    print(f"--- {name}")
    code = main(["membership", str(tmp / name)])
    print("exit code", code)

# %%
# The PR-box weight at which locality breaks: CHSH of the mixture is 4w.
for w in np.linspace(0.4, 0.6, 5):
    print(f"w={w:.2f}", local_polytope_membership(pr.mix(uniform, w)).status)
