"""
Local models with irreducible randomness
========================================

Suppose every local response probability lies in [s, 1 - s].  Each local
expectation is then confined to [-(1 - 2s), 1 - 2s], and because CHSH is
multilinear in those expectations its maximum sits at a corner of that box:
2 (1 - 2s)^2, strictly below 2 for any s > 0.
"""

# %%
import numpy as np

from lhvkit import (chsh_functional, maximize_functional_stochastic, mermin_functional,
                    s_stochastic_max_chsh)

print(" s     corner max   2(1-2s)^2")
for s in np.arange(0, 0.5, 0.05):
    print(f"{s:4.2f}  {s_stochastic_max_chsh(s):10.6f}  {2 * (1 - 2 * s) ** 2:10.6f}")

# %%
# The same corner search over full response profiles works for any functional.
for s in (0.0, 0.1, 0.2):
    print(s, maximize_functional_stochastic(chsh_functional(), s),
          maximize_functional_stochastic(mermin_functional(), s))

# %%
# As s shrinks the bound returns continuously to the deterministic value.
for s in (1e-2, 1e-4, 1e-8):
    print(s, 2 - s_stochastic_max_chsh(s))
