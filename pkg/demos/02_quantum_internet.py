"""Is QKD viable between any two nodes of a photonic quantum internet?

1500 nodes on a 1000 km disc, fibre loss 0.2 dB/km, typical link 226 km.
The verdict compares the typical viable radius with the mean hop distance.
"""
from qtopography.photonic import (
    InternetModel,
    PMode,
    mean_edge_probability,
    qkd_thresholds,
    viability_verdict,
)

t = qkd_thresholds()
for n_p in (1e6, 1e3):
    model = InternetModel(n_p=n_p)
    v = viability_verdict(model, t, target_mean_conc=0.95)
    exact = mean_edge_probability(model, PMode.EXACT)
    print(f"n_p = {n_p:.0e}")
    print(f"  mean edge probability  {v.mean_edge_probability:.4f} (step law), {exact:.4f} (exact law)")
    print(f"  radii  r*_c = {v.r_star_c:.2f}, r*_p = {v.r_star_p:.2f}  vs  <l> = {v.avg_graph_distance:.2f}")
    print(f"  viable: {v.viable}")

sparse = viability_verdict(InternetModel(N=100), t, 0.95)
print(f"\nN = 100: density {sparse.density:.2e} < critical {sparse.critical_density:.2e}, "
      f"connected = {sparse.connected}")
