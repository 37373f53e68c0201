import math

import numpy as np
import pytest

from qtopography import analytics
from qtopography.analytics import Mode, TaskThresholds
from qtopography.network import (
    ParamDistribution,
    assign_edge_states,
    build_erdos_renyi,
    build_lattice,
    build_scale_free,
    from_edge_list,
)
from qtopography.simulation import (
    CSV_COLUMNS,
    SimConfig,
    _mean_se,
    analytic_overlay,
    curves_csv,
    empirical_viability,
    multipath_topography,
    run_campaign,
    single_path_topography,
    viability_from_campaign,
    wilson_interval,
)

POINT_C, POINT_P = ParamDistribution.point(0.95), ParamDistribution.point(0.9)


@pytest.fixture(scope="module")
def er():
    return build_erdos_renyi(600, 5, seed=4, largest_component=True)


@pytest.fixture(scope="module")
def er_homogeneous(er):
    return assign_edge_states(er, POINT_C, POINT_P, seed=0)


@pytest.fixture(scope="module")
def heterogeneous_campaign(er):
    cfg = SimConfig(60, 60, k_max=3, master_seed=9,
                    conc_dist=ParamDistribution.uniform(0.9), prob_dist=ParamDistribution.uniform(0.95))
    return run_campaign(er, cfg)


def test_homogeneous_matches_analytics_exactly(er_homogeneous):
    for pt in single_path_topography(er_homogeneous, SimConfig(30, 30, master_seed=1)):
        assert pt.mean_conc == pytest.approx(analytics.avg_path_concurrence(0.95, pt.l), rel=1e-12, abs=1e-15)
        assert pt.mean_prob == pytest.approx(analytics.avg_path_probability(0.9, pt.l), rel=1e-12)
        assert pt.stderr_conc == pytest.approx(0.0, abs=1e-12)


def test_k1_multi_equals_single(heterogeneous_campaign, er):
    cfg = SimConfig(20, 20, k_max=1, master_seed=3,
                    conc_dist=ParamDistribution.uniform(0.9), prob_dist=ParamDistribution.uniform(0.95))
    assert multipath_topography(er, cfg) == single_path_topography(er, cfg)


def test_tree_multi_equals_single():
    tree = assign_edge_states(build_scale_free(400, 1, seed=2), ParamDistribution.uniform(0.9),
                              ParamDistribution.uniform(0.95), seed=1)
    camp = run_campaign(tree, SimConfig(20, 20, k_max=3, improve_only=False, master_seed=5))
    assert camp.curve("multi") == camp.curve("single")
    assert all(s.n_paths == 1 for s in camp.samples)


def test_counts_and_bookkeeping():
    net = from_edge_list(6, [(0, 1), (1, 2), (3, 4), (4, 5)], q=0.1, p=0.9)
    camp = run_campaign(net, SimConfig(10, 5, master_seed=0, l_max=1))
    assert len(camp.samples) + camp.unreachable + camp.beyond_l_max == 50
    assert camp.unreachable > 0 and camp.beyond_l_max > 0
    assert all(s.l == 1 for s in camp.samples)


def test_fewer_nodes_than_requested_destinations():
    net = from_edge_list(3, [(0, 1), (1, 2)], q=0.1, p=0.9)
    camp = run_campaign(net, SimConfig(4, 100, master_seed=0))
    assert len(camp.samples) == 8


def test_improve_only_never_lowers_concurrence(heterogeneous_campaign):
    for s in heterogeneous_campaign.samples:
        assert s.multi_conc >= s.single_conc - 1e-15


def test_multi_probability_not_above_single_without_selection(er):
    cfg = SimConfig(20, 30, k_max=3, improve_only=False, master_seed=4,
                    conc_dist=ParamDistribution.uniform(0.9), prob_dist=ParamDistribution.uniform(0.95))
    camp = run_campaign(er, cfg)
    assert any(s.n_paths > 1 for s in camp.samples)
    for s in camp.samples:
        assert s.multi_prob <= s.single_prob + 1e-15


def test_single_path_curves_monotone_within_3se(heterogeneous_campaign):
    pts = [p for p in heterogeneous_campaign.curve("single") if p.n_samples >= 30]
    for a, b in zip(pts, pts[1:]):
        assert b.mean_conc <= a.mean_conc + 3 * math.hypot(a.stderr_conc, b.stderr_conc)
        assert b.mean_prob <= a.mean_prob + 3 * math.hypot(a.stderr_prob, b.stderr_prob)


def test_markov_bound(heterogeneous_campaign):
    t = TaskThresholds(0.7, 0.8)
    for mode in ("single", "multi"):
        for r in viability_from_campaign(heterogeneous_campaign, t, mode).records:
            assert r.pr_conc <= min(1.0, r.mean_conc / t.c_star) + 3 * r.stderr_conc
            assert r.pr_prob <= min(1.0, r.mean_prob / t.p_star) + 3 * r.stderr_prob


def test_homogeneous_exceedance_is_a_step(er_homogeneous):
    t = TaskThresholds(0.8, 0.5)
    rep = empirical_viability(er_homogeneous, t, SimConfig(30, 30, master_seed=2))
    r_star = analytics.tvr_radius(t, 0.95, 0.9, Mode.EXACT_LOG, "floored")[2]
    for r in rep.records:
        assert r.pr_joint == (1.0 if r.l <= r_star else 0.0)
    assert rep.tvr_radius == rep.eps_radius == r_star


def _band(b_minus_a, er):
    a = 1 - b_minus_a / 2
    cfg = SimConfig(50, 60, master_seed=11, conc_dist=ParamDistribution(0.05, a, 2 - a, "uniform"),
                    prob_dist=ParamDistribution.point(0.95))
    rep = viability_from_campaign(run_campaign(er, cfg), TaskThresholds(0.8, 0.1))
    # total mass of the transition: how far exceedance stays strictly between 0 and 1
    return sum(min(r.pr_conc, 1 - r.pr_conc) for r in rep.records)


def test_transition_band_grows_with_heterogeneity(er):
    widths = [_band(x, er) for x in (0.1, 0.5, 1.0)]
    assert widths[0] < widths[1] < widths[2]


def test_determinism_across_workers(er):
    cfg = SimConfig(12, 15, k_max=3, master_seed=77,
                    conc_dist=ParamDistribution.uniform(0.9), prob_dist=ParamDistribution.uniform(0.95))
    ref = curves_csv(run_campaign(er, cfg, workers=1))
    assert curves_csv(run_campaign(er, cfg, workers=3)) == ref
    assert curves_csv(run_campaign(er, SimConfig(**{**cfg.__dict__, "master_seed": 78}))) != ref


def test_csv_layout(heterogeneous_campaign):
    lines = curves_csv(heterogeneous_campaign).splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    modes = {ln.rsplit(",", 1)[1] for ln in lines[1:]}
    assert modes == {"single", "multi"}


def test_analytic_overlay_flags(er_homogeneous):
    pts = single_path_topography(er_homogeneous, SimConfig(10, 10, master_seed=1))
    rows = analytic_overlay(pts, 0.95, 0.9)
    assert all(r["conc_within_3se"] and r["prob_within_3se"] for r in rows)
    assert [r["l"] for r in rows] == [p.l for p in pts]


def test_clustered_standard_error():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    m, se = _mean_se(x)
    assert m == 2.5 and se == pytest.approx(x.std(ddof=1) / 2)
    # perfectly correlated pairs: two effective samples
    _, se2 = _mean_se(np.array([1.0, 1.0, 3.0, 3.0]), np.array([0, 0, 1, 1]))
    assert se2 == pytest.approx(1.0)


def test_wilson_interval():
    lo, hi = wilson_interval(0, 20)
    assert lo == 0.0 and 0 < hi < 0.2
    lo, hi = wilson_interval(10, 20)
    assert lo < 0.5 < hi
    assert wilson_interval(0, 0) == (0.0, 1.0)


@pytest.mark.parametrize(
    "kw",
    [dict(n_source_samples=0), dict(n_dest_samples=0), dict(k_max=0), dict(l_max=0),
     dict(conc_dist=ParamDistribution.point(0.9))],
)
def test_config_validation(kw):
    with pytest.raises(ValueError):
        SimConfig(**kw)


def test_lattice_distances_are_exact():
    net = assign_edge_states(build_lattice(6, 6), POINT_C, POINT_P, seed=0)
    camp = run_campaign(net, SimConfig(10, 35, master_seed=3))
    assert max(s.l for s in camp.samples) <= 10
