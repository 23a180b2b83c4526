"""
Bell-state network: the observed statistics bound the ACE away from zero,
yet the true ACE is exactly zero.
"""

import numpy as np

from jointexo import (
    AssumptionSet,
    ace_bounds,
    bell_preset,
    born_distribution,
    check_marginal_exogeneity,
    falsify_pipeline,
    render_report,
    true_ace,
)

# the preset: |Phi-> shared between X and Y, sigma_Z / sigma_X at X and
# (sigma_Z +- sigma_X)/sqrt2 at Y
scenario = bell_preset()
print(np.round(scenario.rho.mat.real, 3))

# Born rule for every (z, x, y)
obs = born_distribution(scenario)
for z in (0, 1):
    for x in (0, 1):
        for y in (0, 1):
            print(f"p({x}{y}|{z}) = {obs(x, y, z):.4f}")

# bounds under joint exogeneity + stratified exclusion restriction
bounds = ace_bounds(obs, AssumptionSet.JE_STRATIFIED_ER)
print(f"ACE in [{bounds.lower:.4f}, {bounds.upper:.4f}]")

# the quantum model's own answer: Y's marginal does not depend on x at all
print("true ACE:", true_ace(scenario))

# Z cannot signal to Y's outcome, so marginal exogeneity still holds
print(check_marginal_exogeneity(scenario))

# the whole pipeline in one call
print(render_report(falsify_pipeline(scenario), "text"))
