"""Watch the standardized index distribution approach the normal law.

For each chain length we draw 4000 chains per seed, standardize the Gutman
index with its closed-form mean and variance, and report the Kolmogorov
sup-distance to the standard normal CDF.  Short chains are far from normal
(n = 3 is a two-point law); by n = 100 the distance sits well under the
1% critical value.
"""

import math
import statistics

from pentachain import IndexKind, normality_test

M = 4000
SEEDS = (1, 2, 3, 4, 5)

print(f"samples per run: {M}, seeds: {SEEDS}")
print(f"{'n':>4} {'median KS':>10} {'1% threshold':>13}")
for n in (3, 5, 20, 100):
    stats = [
        normality_test(IndexKind.GUTMAN, n, 0.5, M, seed).ks_statistic
        for seed in SEEDS
    ]
    threshold = 1.628 / math.sqrt(M)
    print(f"{n:>4} {statistics.median(stats):>10.5f} {threshold:>13.5f}")

# once the statistic drops below the critical value it is dominated by
# finite-sample noise of order 1/sqrt(M); larger M separates n = 20 from
# n = 100 again

# all four closed-form indices are affine in the same mode-weight statistic,
# so their standardized samples coincide draw for draw
a = normality_test(IndexKind.GUTMAN, 100, 0.5, M, 1).ks_statistic
b = normality_test(IndexKind.KF_PLUS, 100, 0.5, M, 1).ks_statistic
print(f"shared statistic across indices: {a:.6f} == {b:.6f}")
