"""
How much each assumption buys.  Dropping the exclusion restriction widens
the interval; the stratified version is as strong as the individual one.
"""

import numpy as np

from jointexo import (
    AssumptionSet,
    ace_bounds,
    bell_preset,
    born_distribution,
    build_lp,
    classical_observed,
    decode_index,
    random_model,
)

obs = born_distribution(bell_preset())
for a in AssumptionSet:
    lp = build_lp(obs, a)
    b = ace_bounds(obs, a)
    print(f"{a.value:<18} rows={lp.num_rows:>2}  [{b.lower:+.4f}, {b.upper:+.4f}]")

# stratified vs individual exclusion restriction on classical data
gaps = []
for seed in range(50):
    o = classical_observed(random_model(seed))
    s = ace_bounds(o, AssumptionSet.JE_STRATIFIED_ER)
    i = ace_bounds(o, AssumptionSet.JE_INDIVIDUAL_ER)
    gaps.append(max(abs(s.lower - i.lower), abs(s.upper - i.upper)))
print("max |stratified - individual| over 50 models:", np.max(gaps))

# the witness at the lower bound is a joint counterfactual distribution;
# its nonzero cells show which response patterns the optimum uses
b = ace_bounds(obs, AssumptionSet.JE_STRATIFIED_ER)
for col in np.flatnonzero(b.lower_witness > 1e-12):
    print(decode_index(int(col)), round(float(b.lower_witness[col]), 4))
