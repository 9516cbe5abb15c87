"""
GHZ: a parity contradiction without inequalities
================================================

For the three-qubit GHZ state, quantum mechanics predicts with certainty
E(XXX) = +1 and E(XYY) = E(YXY) = E(YYX) = -1.  Preassigned +/-1 values
cannot reproduce this: multiplying the four products uses every value twice,
so the product is always +1 while the predictions multiply to -1.
"""

# %%
from lhvkit import (correlator, evaluate_functional, ghz_behavior, ghz_contradiction_check,
                    maximize_functional_classical, mermin_functional)

b = ghz_behavior(3)
for xs in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]:
    label = "".join("XY"[x] for x in xs)
    print(label, f"{correlator(b, xs):+.12f}")

# %%
report = ghz_contradiction_check()
print("strategies checked:", report.strategies_checked)
print("some strategy meets all four constraints:", report.deterministic_consistent)
print("parity of the four products, any strategy:", report.parity_products)
print("parity required by the predictions:", report.required_parity)

# %%
# The same fact seen through the Mermin expression and the LP.
mermin = mermin_functional()
print("Mermin, quantum:", evaluate_functional(mermin, b))
print("Mermin, classical max:", maximize_functional_classical(mermin).value)
print("LP:", report.lp_status.status, "certificate value", report.lp_status.certificate.value)
