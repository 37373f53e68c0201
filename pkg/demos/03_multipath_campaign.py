"""Single-path versus multi-path entanglement distribution.

Samples 100 sources x 100 destinations on a few topologies with mean edge
concurrence 0.9 and mean edge probability 0.95, purifying up to three
edge-disjoint paths. Edge parameters are redrawn for every source sample.

Pass ``--quick`` for a 30 x 30 run; ``--csv DIR`` writes one CSV per topology.
"""
import argparse
import math
from pathlib import Path

from qtopography import analytics
from qtopography.network import (
    ParamDistribution,
    build_erdos_renyi,
    build_lattice,
    build_scale_free,
    build_soft_rgg,
)
from qtopography.simulation import SimConfig, curves_csv, run_campaign

ap = argparse.ArgumentParser()
ap.add_argument("--quick", action="store_true")
ap.add_argument("--csv", type=Path)
ap.add_argument("--workers", type=int, default=1)
args = ap.parse_args()

n = 30 if args.quick else 100
cfg = SimConfig(n, n, k_max=3, improve_only=True, master_seed=1,
                conc_dist=ParamDistribution.uniform(0.9), prob_dist=ParamDistribution.uniform(0.95))
networks = {
    "soft_rgg": build_soft_rgg(1500, 1000.0, seed=3, largest_component=True),
    "erdos_renyi": build_erdos_renyi(2000, 6, seed=1, largest_component=True),
    "scale_free": build_scale_free(2000, 3, seed=1),
    "lattice": build_lattice(40, 40),
}
for name, net in networks.items():
    camp = run_campaign(net, cfg, workers=args.workers)
    print(f"\n{name}: {net.node_count} nodes, mean degree {net.mean_degree:.1f}")
    print(f"{'l':>3} {'n':>5} {'C single':>9} {'C multi':>8} {'gain/sd':>8} {'P single':>9} {'P multi':>8} {'C exact':>8}")
    for s, m in zip(camp.curve("single"), camp.curve("multi")):
        if s.n_samples < 10 or s.l > 15:
            continue
        z = (m.mean_conc - s.mean_conc) / max(math.hypot(s.stderr_conc, m.stderr_conc), 1e-300)
        print(f"{s.l:3d} {s.n_samples:5d} {s.mean_conc:9.4f} {m.mean_conc:8.4f} {z:8.1f} "
              f"{s.mean_prob:9.4f} {m.mean_prob:8.4f} {analytics.avg_path_concurrence(0.9, s.l):8.4f}")
    if args.csv:
        args.csv.mkdir(parents=True, exist_ok=True)
        (args.csv / f"{name}.csv").write_text(curves_csv(camp))

print("\nPurification lifts concurrence wherever short alternates exist, and always")
print("at the price of probability. Sparse graphs have no short detour for an")
print("adjacent pair, so the l = 1 gain only appears on the dense soft RGG.")
