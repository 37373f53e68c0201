"""How far can entanglement travel on average?

Prints the entanglement radius for a few mean edge concurrences, then the
typical and maximal viable radii for QKD (c* = 0.8, p* from a 1 kHz key
rate) in both evaluation modes.
"""
from qtopography import analytics
from qtopography.analytics import Mode
from qtopography.photonic import qkd_thresholds

print("mean edge concurrence -> entanglement radius r^C")
for mean in (0.99, 0.985, 0.98, 0.95, 0.9):
    print(f"  {mean:6.3f}  {analytics.entanglement_radius(1 - mean):8.2f}")

t = qkd_thresholds()
print(f"\nQKD thresholds: c* = {t.c_star}, p* = {t.p_star:.5f}, xi = {t.xi}")
print(f"{'mu1':>6} {'mu2':>6} {'mode':>12} {'r*_c':>7} {'r*_p':>7} {'r*':>7}")
for mu1, mu2 in ((0.95, 0.404), (0.95, 0.146), (0.99, 0.9)):
    for mode in (Mode.EXACT_LOG, Mode.SMALL_DELTA):
        rc, rp, r = analytics.tvr_radius(t, mu1, mu2, mode)
        print(f"{mu1:6.3f} {mu2:6.3f} {mode.value:>12} {rc:7.2f} {rp:7.2f} {r:7.2f}")

print("\nWhen delta is large (mu2 = 0.404) the small-delta closed form overstates")
print("the probability radius; exact_log is the largest l with mu2^l >= p*.")

print("\nEdge means that make both radii match the graph radius (N = 1e6):")
for topo in ("erdos_renyi", "scale_free"):
    c, p = analytics.scaling_targets(10**6, topo)
    print(f"  {topo:12s} mean concurrence {c:.3f}, mean probability {p:.3f}")
