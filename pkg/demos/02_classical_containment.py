"""
Classical hidden-variable models never escape the bounds: the true ACE of a
response-function model always lies in the identified interval.
"""

from jointexo import (
    AssumptionSet,
    ace_bounds,
    classical_observed,
    classical_true_ace,
    random_model,
    sample_dataset,
)

worst = 0.0
for seed in range(100):
    model = random_model(seed)
    obs = classical_observed(model)
    ace = classical_true_ace(model)
    b = ace_bounds(obs, AssumptionSet.JE_STRATIFIED_ER)
    # signed distance outside the interval (negative means inside)
    worst = max(worst, b.lower - ace, ace - b.upper)
print(f"largest excursion over 100 models: {worst:.2e}")

# one model in detail
model = random_model(7)
print("weights:", model.weights.round(3))
obs = classical_observed(model)
for a in AssumptionSet:
    b = ace_bounds(obs, a)
    print(f"{a.value:<18} [{b.lower:+.4f}, {b.upper:+.4f}]")
print("true ACE:", round(classical_true_ace(model), 4))

# with finite data the bounds are estimated from empirical frequencies
for n in (1_000, 100_000, 1_000_000):
    emp = sample_dataset(model, n, seed=1).empirical()
    b = ace_bounds(emp, AssumptionSet.JE_STRATIFIED_ER)
    print(f"n={n:>9,}: [{b.lower:+.4f}, {b.upper:+.4f}]")
