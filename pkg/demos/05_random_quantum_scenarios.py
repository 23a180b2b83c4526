"""
How often does a random two-qubit network falsify joint exogeneity?

Random pure states with random unsharp POVMs almost never do:
the violation needs a near-maximally entangled state and well-aligned
measurements, as in the Bell preset.
"""

from collections import Counter

from jointexo import Verdict, falsify_pipeline, random_scenario

verdicts = Counter()
largest = (0.0, None)
for seed in range(300):
    report = falsify_pipeline(random_scenario(seed))
    verdicts[report.verdict] += 1
    if report.margin is not None and report.margin > largest[0]:
        largest = (report.margin, seed)

for v in Verdict:
    print(f"{v.value:<28} {verdicts[v]}")
print("largest margin %.4f at seed %s" % largest)
