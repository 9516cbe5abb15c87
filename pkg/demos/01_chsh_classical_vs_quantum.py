"""
CHSH: deterministic strategies against the singlet
===================================================

Every local deterministic strategy fixes one +/-1 answer per setting.  With
two parties and two settings there are 16 of them, and none pushes the CHSH
combination E00 + E01 + E10 - E11 past 2.  The singlet state measured along
suitable directions reaches 2*sqrt(2).
"""

# %%
import numpy as np

from lhvkit import (chsh_functional, chsh_singlet_behavior, correlator, enumerate_deterministic,
                    evaluate_functional, local_polytope_membership, maximize_functional_classical)

chsh = chsh_functional()

# %%
# Value of CHSH on each deterministic strategy, written as +/-1 answers.
for strategy in enumerate_deterministic(chsh.scenario):
    value = evaluate_functional(chsh, strategy.behavior())
    print(strategy.spins(), f"{value:+.0f}")

best = maximize_functional_classical(chsh)
print("classical maximum:", best.value, "reached first by", best.argmax.spins())

# %%
# The singlet, Alice along 0 and pi/2, Bob along +pi/4 and -pi/4 (x-z plane).
b = chsh_singlet_behavior()
for xs in b.scenario.joint_settings:
    print("E", xs, f"{correlator(b, xs):+.6f}")
print("CHSH:", evaluate_functional(chsh, b), " 2*sqrt(2) =", 2 * np.sqrt(2))

# %%
# The LP finds no mixture of the 16 strategies reproducing this table and
# returns the separating inequality it found.
res = local_polytope_membership(b)
cert = res.certificate
print(res.status, "certificate value", cert.value, "bound", cert.classical_max,
      "margin", cert.margin)
print("largest weight of the singlet table against white noise that stays local:",
      res.visibility)
