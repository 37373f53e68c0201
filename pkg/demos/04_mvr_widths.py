"""Width of the maximal viable region: mean-only estimate versus the
distribution-width law.

The mean-only estimate ignores how spread out the edge concurrences are;
the distribution-width law vanishes for a homogeneous network and grows
with b - a. The table shows where the two agree and where they do not.
"""
import math

from qtopography import analytics
from qtopography.analytics import TaskThresholds

print(f"{'delta1':>7} {'b1':>5} {'eps':>5} {'mean form':>10} {'dist form':>10} {'ratio':>7}")
for delta in (0.005, 0.01):
    for b in (1.05, 1.1, 1.2):
        a = 2 - b
        for eps in (1 - 1 / b + 1e-9, 0.95, 0.99):
            t = TaskThresholds(0.8, 0.1, eps_c=eps)
            r_star = analytics.tvr_radius(t, 1 - delta, 0.99)[0]
            w1 = analytics.mvr_width_mean_form(t, 1 - delta, eps)
            w2 = analytics.mvr_width_distribution_form(r_star, eps, a, b)
            ratio = w2 / w1 if w1 else math.nan
            print(f"{delta:7.3f} {b:5.2f} {eps:5.3f} {w1:10.3f} {w2:10.3f} {ratio:7.2f}")
