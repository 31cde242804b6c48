"""
Robust scores, traffic drop ratios, and the bootstrap
=====================================================
"""

import numpy as np

from hoaxlens import bootstrap_mean_ci, cohort_d, delta_v, modified_z

# Median/MAD z-score: where does a value sit relative to a cohort, in units
# of median absolute deviation?
cohort = [2.0, 2.5, 3.0, 3.5, 4.0, 9.0]
score = modified_z(8.0, cohort, feature="plain_length")
print(f"value 8.0 against cohort median {score.cohort_median}, "
      f"MAD {score.cohort_mad}: z = {score.z:+.3f}")
# Stretching the outlier tenfold changes neither median nor MAD, which is
# the point of using them.
score2 = modified_z(8.0, cohort[:-1] + [90.0], feature="plain_length")
print(f"same value, outlier at 90 instead: z = {score2.z:+.3f}")

# Traffic drop ratio: medians of seven daily totals on each side of day zero,
# then (before - after) / (before + after). Bounded by [-1, 1].
before = [180, 195, 170, 210, 188, 176, 240]
after = [60, 71, 55, 64, 80, 58, 49]
drop = delta_v(before, after, title="Suspect_page")
print(f"\nbefore median {np.median(before):.0f}, after median {np.median(after):.0f}")
print(f"delta_v = {drop.delta_v:+.4f}")
print(f"reversed windows: {delta_v(after, before).delta_v:+.4f}")
print(f"no traffic at all: {delta_v([0] * 7, [0] * 7)}")

# D is the gap between one article's drop and its cohort's mean drop.
rng = np.random.default_rng(42)
cohort_scores = []
for i in range(40):
    base = rng.integers(40, 80, size=7).tolist()
    wobble = rng.integers(40, 80, size=7).tolist()
    cohort_scores.append(delta_v(base, wobble, title=f"Member_{i:02d}"))
result = cohort_d(drop, cohort_scores)
print(f"\ncohort mean drop {result.cohort_mean:+.4f} over {result.cohort_n} members")
print(f"D = {result.d:+.4f}")

# A percentile bootstrap puts an interval around a mean of such gaps.
d_values = rng.normal(0.18, 0.3, size=24).tolist()
summary = bootstrap_mean_ci(d_values, resamples=10_000, seed=7)
print(f"\nmean D {summary.sample_mean:+.4f}, "
      f"95% CI [{summary.ci_low:+.4f}, {summary.ci_high:+.4f}] "
      f"({summary.resamples} resamples, seed {summary.seed})")
print("zero outside the interval" if summary.ci_low > 0 else "interval reaches zero")
