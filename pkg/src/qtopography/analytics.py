"""Closed-form topography: mean path parameters, viability radii and widths.

Two evaluation modes are offered for radii:

* ``small_delta`` evaluates the small-``delta`` closed forms literally.
* ``exact_log`` returns the largest real ``l`` for which the exact mean
  path parameters still meet the threshold.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum

LN3 = math.log(3.0)

Z1_DEFAULT = 1.0 / 3.0
Z2_DEFAULT = 0.5
XI_DEFAULT = 0.01


class Mode(str, Enum):
    EXACT = "exact"
    ASYMPTOTIC = "asymptotic"
    EXACT_LOG = "exact_log"
    SMALL_DELTA = "small_delta"


class FloorPolicy(str, Enum):
    REAL = "real"
    FLOORED = "floored"


@dataclass(frozen=True)
class TaskThresholds:
    """Task requirements: thresholds ``(c_star, p_star)``, cutoff ``xi``, MVR ``eps``."""

    c_star: float
    p_star: float
    xi: float = XI_DEFAULT
    eps_c: float = 1.0
    eps_p: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.c_star <= 1.0:
            raise ValueError(f"c_star={self.c_star} outside [0, 1]")
        if not 0.0 < self.xi <= 1.0:
            raise ValueError(f"xi={self.xi} outside (0, 1]")
        if not self.xi <= self.p_star <= 1.0:
            raise ValueError(f"p_star={self.p_star} outside [xi, 1]")
        for name in ("eps_c", "eps_p"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} outside [0, 1]")


@dataclass
class RadiiReport:
    r_c: float
    r_p: float
    r_star_c: float
    r_star_p: float
    r_star: float
    r_tilde_c: float
    r_tilde_p: float
    r_tilde: float
    width: float
    floor_policy: FloorPolicy = FloorPolicy.REAL
    mode: Mode = Mode.EXACT_LOG

    def to_dict(self) -> dict:
        d = asdict(self)
        d["floor_policy"] = self.floor_policy.value
        d["mode"] = self.mode.value
        return d


# -- mean path parameters ---------------------------------------------------


def avg_path_concurrence(mean_conc: float, l: int, mode: Mode | str = Mode.EXACT) -> float:
    """Mean end-to-end concurrence after swapping along ``l`` i.i.d. edges."""
    mode = Mode(mode)
    if mode is Mode.EXACT:
        base = (1.0 + 2.0 * mean_conc) / 3.0
    elif mode is Mode.ASYMPTOTIC:
        base = 1.0 - (2.0 / 3.0) * (1.0 - mean_conc)
    else:
        raise ValueError(f"unsupported mode {mode}")
    return max(0.0, 1.5 * base**l - 0.5)


def avg_path_probability(mean_prob: float, l: int) -> float:
    return mean_prob**l


# -- length scales ----------------------------------------------------------


def entanglement_radius(delta1: float) -> float:
    """``(3/2) ln 3 / delta1``; ``inf`` for a perfect network."""
    if delta1 < 0:
        raise ValueError("delta1 must be non-negative")
    return math.inf if delta1 == 0 else 1.5 * LN3 / delta1


def connection_radius(delta2: float, xi: float = XI_DEFAULT) -> float:
    if not 0.0 < xi <= 1.0:
        raise ValueError("xi must lie in (0, 1]")
    if xi == 1.0:
        return 0.0
    if delta2 < 0:
        raise ValueError("delta2 must be non-negative")
    return math.inf if delta2 == 0 else math.log(1.0 / xi) / delta2


def _floor(x: float, policy: FloorPolicy) -> float:
    if policy is FloorPolicy.FLOORED and math.isfinite(x):
        return float(math.floor(x + 1e-9))
    return x


def _conc_radius(c_thr: float, mean_conc: float, mode: Mode) -> float:
    if mode is Mode.SMALL_DELTA:
        r = entanglement_radius(1.0 - mean_conc)
        if math.isinf(r):
            return math.inf
        return max(0.0, r * (1.0 - math.log(1.0 + 2.0 * c_thr) / LN3))
    if mean_conc >= 1.0:
        return math.inf
    target = (2.0 * c_thr + 1.0) / 3.0
    if target <= 0.0:
        return math.inf
    return max(0.0, math.log(target) / math.log((1.0 + 2.0 * mean_conc) / 3.0))


def _prob_radius(p_thr: float, mean_prob: float, xi: float, mode: Mode) -> float:
    if p_thr <= 0.0:
        return math.inf
    if mode is Mode.SMALL_DELTA:
        r = connection_radius(1.0 - mean_prob, xi)
        if math.isinf(r):
            return math.inf
        if xi == 1.0:
            return 0.0
        return max(0.0, r * math.log(p_thr) / math.log(xi))
    if mean_prob >= 1.0:
        return math.inf
    if mean_prob <= 0.0:
        return 0.0
    return max(0.0, math.log(p_thr) / math.log(mean_prob))


def tvr_radius(
    thresholds: TaskThresholds,
    mean_conc: float,
    mean_prob: float,
    mode: Mode | str = Mode.EXACT_LOG,
    floor_policy: FloorPolicy | str = FloorPolicy.REAL,
) -> tuple[float, float, float]:
    """Typical-viable-region radii ``(r_star_c, r_star_p, r_star)``."""
    mode, fp = Mode(mode), FloorPolicy(floor_policy)
    rc = _floor(_conc_radius(thresholds.c_star, mean_conc, mode), fp)
    rp = _floor(_prob_radius(thresholds.p_star, mean_prob, thresholds.xi, mode), fp)
    return rc, rp, min(rc, rp)


def mvr_radius(
    thresholds: TaskThresholds,
    mean_conc: float,
    mean_prob: float,
    mode: Mode | str = Mode.EXACT_LOG,
    floor_policy: FloorPolicy | str = FloorPolicy.REAL,
) -> tuple[float, float, float]:
    """Maximal-viable-region radii: thresholds relaxed to ``c*eps_c`` and ``p*eps_p``."""
    mode, fp = Mode(mode), FloorPolicy(floor_policy)
    t = thresholds
    rc = _floor(_conc_radius(t.c_star * t.eps_c, mean_conc, mode), fp)
    rp = _floor(_prob_radius(t.p_star * t.eps_p, mean_prob, t.xi, mode), fp)
    return rc, rp, min(rc, rp)


def radii_report(
    thresholds: TaskThresholds,
    mean_conc: float,
    mean_prob: float,
    mode: Mode | str = Mode.EXACT_LOG,
    floor_policy: FloorPolicy | str = FloorPolicy.REAL,
) -> RadiiReport:
    mode, fp = Mode(mode), FloorPolicy(floor_policy)
    tvr = tvr_radius(thresholds, mean_conc, mean_prob, mode, fp)
    mvr = mvr_radius(thresholds, mean_conc, mean_prob, mode, fp)
    width = mvr[2] - tvr[2] if math.isfinite(mvr[2]) else math.inf
    return RadiiReport(
        entanglement_radius(1.0 - mean_conc),
        connection_radius(1.0 - mean_prob, thresholds.xi),
        *tvr, *mvr, width, fp, mode,
    )


# -- widths and bounds ------------------------------------------------------


def mvr_width_mean_form(thresholds: TaskThresholds, mean_conc: float, eps: float) -> float:
    """Width ``r^C ln[(1 + 2c*)/(1 + 2c* eps)]`` from the mean-only bound.

    This is ``ln 3`` times the small-delta concurrence radius difference
    ``r_tilde_c - r_star_c``; the form with ``r^C`` in front is kept as the
    published estimate, and :func:`radii_report` gives the exact difference.
    """
    c = thresholds.c_star
    return entanglement_radius(1.0 - mean_conc) * math.log((1 + 2 * c) / (1 + 2 * c * eps))


def mvr_width_distribution_form(r_star: float, eps: float, a: float, b: float) -> float:
    """Width tied to the spread ``b - a`` of the edge-parameter law.

    Valid only for ``eps >= 1 - 1/b``; the same expression serves the
    probability branch with that parameter's ``(a, b)``.
    """
    lower = 1.0 - 1.0 / b
    if eps < lower - 1e-15 or eps > 1.0:
        raise ValueError(f"eps={eps} outside validity range [1 - 1/b, 1] = [{lower}, 1]")
    denom = 1.0 - (1.0 - eps) * b
    if b == a or eps == 1.0:
        return 0.0
    if denom <= 0.0:
        return math.inf
    return r_star * (1.0 - eps) * (b - a) / denom


def sgp_optimality_bound(r_star: float, a1: float, b1: float, a2: float, b2: float) -> float:
    """Lower bound on the probability that the shortest graph path is Pareto-optimal."""
    return 1.0 / (r_star * (b1 - a1) + b1) / (r_star * (b2 - a2) + b2)


def scaling_targets(n_nodes: int, topology: str, xi: float = XI_DEFAULT) -> tuple[float, float]:
    """Mean edge parameters that make both radii equal the graph radius.

    The graph radius is ``ln N`` for Erdos-Renyi and ``ln ln N`` for scale-free.
    """
    if n_nodes < 3:
        raise ValueError("n_nodes must be >= 3")
    topology = getattr(topology, "value", topology)
    if topology == "erdos_renyi":
        r = math.log(n_nodes)
    elif topology == "scale_free":
        r = math.log(math.log(n_nodes))
    else:
        raise ValueError(f"no radius law for topology {topology!r}")
    if r <= 0:
        raise ValueError("graph radius ln ln N must be positive")
    return 1.0 - 1.5 * LN3 / r, xi ** (1.0 / r)


def multipath_estimates(
    delta1: float,
    delta2: float,
    k: int,
    thresholds: TaskThresholds,
    z1: float = Z1_DEFAULT,
    z2: float = Z2_DEFAULT,
) -> tuple[float, float, float]:
    """Short-path estimates ``(r_c^(k), r_p^(k), k_beneficial_max)`` for k-path pumping.

    For ``k == 1`` the single-path small-delta radii are returned.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    k_max = math.inf if delta2 == 0 else delta1 / delta2
    if k == 1:
        rc, rp, _ = tvr_radius(thresholds, 1 - delta1, 1 - delta2, Mode.SMALL_DELTA)
        return rc, rp, k_max
    c, p = thresholds.c_star, thresholds.p_star
    rc = math.inf if delta1 == 0 else (1.0 - c) / (z1 * delta1)
    denom = k * (z2 * delta1 + delta2)
    rp = math.inf if denom == 0 else (1.0 - p) / denom
    return rc, rp, k_max
