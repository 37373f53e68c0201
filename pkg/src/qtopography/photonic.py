"""Viability of point-to-point QKD on a photonic soft-random-geometric network.

Mean edge probability follows from nested annulus integrals over a disc of
radius ``R``: the outer integral places a source at radius ``h``, the inner
one counts nodes at Euclidean distance ``z`` from it.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np
from scipy import integrate, optimize

from . import analytics
from .analytics import Mode, TaskThresholds
from .network import photonic_factor

# Published step cutoffs (km) for the photonic factor.
STEP_CUTOFFS_KM = {1e3: 120.0, 1e6: 250.0}
MAIN_TEXT_DENSITY = 3.18e-4


class NumericalError(RuntimeError):
    pass


class NoKeyError(ValueError):
    """The concurrence is too low for a positive secure-key fraction."""


class PMode(str, Enum):
    STEP = "step"
    EXACT = "exact"


class AnnulusMode(str, Enum):
    APPROX = "approx"
    EXACT = "exact"


@dataclass(frozen=True)
class InternetModel:
    R: float = 1000.0
    N: int = 1500
    two_alpha_R: float = 226.0
    beta: float = 1.0
    gamma: float = 0.2
    n_p: float = 1e6
    b_coeff: float = 5e-5
    rho_c: float = 6.82e-5
    step_cutoff_km: float | None = None

    def __post_init__(self):
        for name in ("R", "N", "two_alpha_R", "beta", "gamma", "n_p", "rho_c"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.b_coeff < 0:
            raise ValueError("b_coeff must be non-negative")

    @property
    def density(self) -> float:
        return self.N / (math.pi * self.R**2)

    @property
    def cutoff_km(self) -> float:
        """Step position: explicit override, published value, else where p(z) = 1/2."""
        if self.step_cutoff_km is not None:
            return self.step_cutoff_km
        for n_p, L in STEP_CUTOFFS_KM.items():
            if math.isclose(self.n_p, n_p):
                return L
        # 1 - (1 - t)^n = 1/2  =>  t = 1 - 2^(-1/n)
        t = -math.expm1(-math.log(2.0) / self.n_p)
        return -10.0 * math.log10(t) / self.gamma


def edge_factor(z, model: InternetModel):
    """``beta * exp(-z / 2 alpha R)``: probability that two nodes share an edge."""
    return model.beta * np.exp(-np.asarray(z, float) / model.two_alpha_R)


def photonic_connection(z, model: InternetModel, p_mode: PMode | str = PMode.EXACT):
    if PMode(p_mode) is PMode.STEP:
        return np.where(np.asarray(z, float) < model.cutoff_km, 1.0, 0.0)
    return photonic_factor(z, model.gamma, model.n_p)


def connection_law(z, model: InternetModel, p_mode: PMode | str = PMode.EXACT):
    return edge_factor(z, model) * photonic_connection(z, model, p_mode)


def annulus_node_count(h: float, z: float, model: InternetModel, mode: AnnulusMode | str = AnnulusMode.APPROX) -> float:
    """Nodes per km of radius at distance ``z`` from a point ``h`` km off-centre.

    Inside ``z <= R - h`` the full circle lies in the disc. Beyond it the arc
    inside the disc has half-angle ``arccos((h^2 + z^2 - R^2) / 2hz)``; the
    ``approx`` mode replaces that angle with ``arccos(h / 2R)``.
    """
    R, rho = model.R, model.density
    if not 0 <= h <= R:
        raise ValueError("h must lie in [0, R]")
    if z < 0:
        raise ValueError("z must be non-negative")
    if z <= R - h:
        return 2.0 * math.pi * rho * z
    if z > R + h:
        return 0.0
    if AnnulusMode(mode) is AnnulusMode.APPROX:
        angle = math.acos(min(1.0, h / (2.0 * R)))
    else:
        angle = math.acos(max(-1.0, min(1.0, (h * h + z * z - R * R) / (2.0 * h * z))))
    return 2.0 * rho * z * angle


_QUAD_OPTS = dict(epsrel=1e-4, epsabs=0.0, limit=200)


def _quad(f, a, b, points=()):
    pts = sorted(x for x in points if a < x < b)
    val, err, info = integrate.quad(f, a, b, points=pts or None, full_output=True, **_QUAD_OPTS)[:3]
    if not np.isfinite(val):
        raise NumericalError(f"quadrature diverged on [{a}, {b}] (neval={info['neval']})")
    return val


def _inner(h, model, p_mode, mode, with_p):
    L = model.cutoff_km if PMode(p_mode) is PMode.STEP else None

    def f(z):
        v = annulus_node_count(h, z, model, mode) * float(edge_factor(z, model))
        if with_p:
            v *= float(photonic_connection(z, model, p_mode))
        return v

    upper = model.R + h
    if with_p and L is not None:
        upper = min(upper, L)
    return _quad(f, 0.0, upper, points=(model.R - h, L or -1))


def edge_integrals(model: InternetModel, p_mode: PMode | str = PMode.STEP,
                   annulus: AnnulusMode | str = AnnulusMode.APPROX) -> tuple[float, float]:
    """Total edge probability mass and expected edge count (each counted from both ends)."""
    rho = model.density

    def outer(with_p):
        return _quad(lambda h: _inner(h, model, p_mode, annulus, with_p) * 2 * math.pi * rho * h,
                     0.0, model.R)

    return outer(True), outer(False)


def mean_edge_probability(model: InternetModel, p_mode: PMode | str = PMode.STEP,
                          annulus: AnnulusMode | str = AnnulusMode.APPROX) -> float:
    """Mean photonic-connection probability over all edges of the network."""
    total_p, total_n = edge_integrals(model, p_mode, annulus)
    if total_n <= 0:
        raise NumericalError("no edges in the model")
    return total_p / total_n


def average_graph_distance(model: InternetModel) -> float:
    """Empirical law ``b * sqrt(N) / rho`` for the mean hop distance."""
    return model.b_coeff * math.sqrt(model.N) / model.density


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def key_rate_factor(conc: float) -> float:
    """Secure fraction ``1 - 2 h[(1 - C)/2]`` of a pair with concurrence ``C``."""
    return 1.0 - 2.0 * binary_entropy((1.0 - conc) / 2.0)


def min_key_concurrence() -> float:
    """Concurrence at which the secure fraction vanishes (about 0.78)."""
    return optimize.brentq(key_rate_factor, 0.5, 0.99, xtol=1e-14)


def qkd_min_probability(r_sec: float, r_eps: float, conc: float) -> float:
    """Minimum connection probability for a key rate ``r_sec`` from sources at ``r_eps``.

    Raises:
        NoKeyError: the secure fraction is not positive, or the rate would
            need a connection probability above 1.
    """
    f = key_rate_factor(conc)
    if f <= 0.0:
        raise NoKeyError(f"concurrence {conc} yields no secure key (fraction {f:.4g} <= 0)")
    p = r_sec / (r_eps * f)
    if p > 1.0:
        raise NoKeyError(f"concurrence {conc} cannot reach {r_sec:g} Hz: needs probability {p:.4g} > 1")
    return p


def qkd_thresholds(r_sec: float = 1e3, r_eps: float = 1e6, conc: float = 0.8,
                   xi: float = analytics.XI_DEFAULT) -> TaskThresholds:
    return TaskThresholds(conc, qkd_min_probability(r_sec, r_eps, conc), xi)


@dataclass
class ViabilityVerdict:
    density: float
    critical_density: float
    connected: bool
    mean_edge_probability: float
    avg_graph_distance: float
    r_star_c: float
    r_star_p: float
    r_star: float
    viable: bool
    small_delta: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    inputs: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def viability_verdict(model: InternetModel, thresholds: TaskThresholds, target_mean_conc: float) -> ViabilityVerdict:
    """Whether every S-D pair is on average within the typical viable radius.

    Radii are compared as reals against the mean hop distance.
    """
    mu2 = mean_edge_probability(model, PMode.STEP)
    rho = model.density
    connected = rho > model.rho_c
    avg_l = average_graph_distance(model)
    rc, rp, r = analytics.tvr_radius(thresholds, target_mean_conc, mu2, Mode.EXACT_LOG)
    sc, sp, s = analytics.tvr_radius(thresholds, target_mean_conc, mu2, Mode.SMALL_DELTA)
    notes = []
    if model.N == 1500 and model.R == 1000.0:
        notes.append(
            f"density N/(pi R^2) = {rho:.3g} per km^2 is used; "
            f"an alternative quoted value is {MAIN_TEXT_DENSITY:.3g}"
        )
    if not connected:
        notes.append("density below critical density: disconnected regime")
    return ViabilityVerdict(
        rho, model.rho_c, connected, mu2, avg_l, rc, rp, r,
        bool(connected and r >= avg_l),
        {"r_star_c": sc, "r_star_p": sp, "r_star": s},
        notes,
        {"model": asdict(model), "thresholds": asdict(thresholds), "target_mean_conc": target_mean_conc},
    )
