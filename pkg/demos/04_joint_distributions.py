"""
Local models and joint distributions are the same thing
=======================================================

A finite local model (weights over a hidden variable, local response
probabilities) yields a joint distribution over the outcomes of *all*
settings at once; marginalizing that joint gives back the observed table.
Conversely every joint distribution is a mixture of deterministic
strategies, one per full assignment.  The PR box shows that no-signalling
alone does not guarantee such a joint exists.
"""

# %%
import numpy as np

from lhvkit import (Scenario, behavior_from_joint, behavior_from_model, is_product_behavior,
                    joint_from_model, local_polytope_membership, make_pr_box, model_from_joint,
                    no_signalling_check, random_joint, random_model)

rng = np.random.default_rng(7)
chsh = Scenario.chsh()

# %%
m = random_model(chsh, rng)
b = behavior_from_model(m)
j = joint_from_model(m)
print("components:", len(m.components))
print("joint over (A0, A1, B0, B1), shape", j.table.shape)
print("marginals reproduce the model:", np.abs(behavior_from_joint(j).table - b.table).max())

# %%
j = random_joint(chsh, rng)
m = model_from_joint(j)
print("deterministic components:", len(m.components))
print("joint -> model -> joint:", np.abs(joint_from_model(m).flat - j.flat).max())

# %%
# One hidden-variable value alone gives no correlations at all.
single = random_model(chsh, rng, max_components=1)
print("single component product:", is_product_behavior(behavior_from_model(single)))

# %%
pr = make_pr_box()
print("PR box no-signalling:", no_signalling_check(pr).passes)
print("PR box local:", local_polytope_membership(pr).feasible)
