"""Network topologies and random edge-parameter assignment."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any

import networkx as nx
import numpy as np

from .quantum_core import DomainError


class ConfigError(ValueError):
    """A distribution or generator configuration is invalid."""


class Shape(str, Enum):
    UNIFORM = "uniform"
    POINT = "point"


class Topology(str, Enum):
    ERDOS_RENYI = "erdos_renyi"
    SCALE_FREE = "scale_free"
    SOFT_RGG = "soft_rgg"
    LATTICE = "lattice"
    CUSTOM = "custom"


_EPS = 1e-12


@dataclass(frozen=True)
class ParamDistribution:
    """Edge-parameter law with mean ``1-delta``, max ``1-a*delta``, min ``1-b*delta``.

    ``uniform`` requires ``a + b = 2`` so the mean is exact; ``point`` requires
    ``a = b = 1``.
    """

    delta: float
    a: float = 1.0
    b: float = 1.0
    shape: Shape = Shape.POINT

    def __post_init__(self):
        object.__setattr__(self, "shape", Shape(self.shape))
        d, a, b = self.delta, self.a, self.b
        if not 0.0 <= d <= 1.0:
            raise ConfigError(f"delta={d} outside [0, 1]")
        if not (0.0 <= a <= 1.0 + _EPS and a <= 1.0 + _EPS <= b + 2 * _EPS):
            raise ConfigError(f"need 0 <= a <= 1 <= b, got a={a}, b={b}")
        if self.minimum < -_EPS:
            raise ConfigError(f"support leaves [0, 1]: min = 1 - b*delta = {self.minimum}")
        if self.shape is Shape.UNIFORM and abs(a + b - 2.0) > 1e-9:
            raise ConfigError(f"uniform shape needs a + b = 2, got {a + b}")
        if self.shape is Shape.POINT and (abs(a - 1) > 1e-9 or abs(b - 1) > 1e-9):
            raise ConfigError("point shape needs a = b = 1")

    @classmethod
    def point(cls, mean: float) -> "ParamDistribution":
        return cls(1.0 - mean, 1.0, 1.0, Shape.POINT)

    @classmethod
    def uniform(cls, mean: float, a: float = 0.5) -> "ParamDistribution":
        return cls(1.0 - mean, a, 2.0 - a, Shape.UNIFORM)

    @property
    def mean(self) -> float:
        return 1.0 - self.delta

    @property
    def maximum(self) -> float:
        return 1.0 - self.a * self.delta

    @property
    def minimum(self) -> float:
        return 1.0 - self.b * self.delta

    @property
    def std(self) -> float:
        return (self.maximum - self.minimum) / np.sqrt(12.0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.shape is Shape.POINT:
            return np.full(size, self.mean)
        lo, hi = max(self.minimum, 0.0), min(self.maximum, 1.0)
        return rng.uniform(lo, hi, size)

    def to_dict(self) -> dict:
        return {"delta": self.delta, "a": self.a, "b": self.b, "shape": self.shape.value}


@dataclass(frozen=True, eq=False)
class QuantumNetwork:
    """Undirected simple graph on nodes ``0..node_count-1`` with per-edge (q, p).

    ``edges`` is an ``(m, 2)`` int array with ``u < v`` per row; ``edge_q``
    and ``edge_p`` are aligned with it.
    """

    node_count: int
    edges: np.ndarray
    edge_q: np.ndarray
    edge_p: np.ndarray
    topology_tag: Topology = Topology.CUSTOM
    node_positions: np.ndarray | None = None
    edge_length_km: np.ndarray | None = None
    seed: int | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if len(edges):
            edges = np.sort(edges, axis=1)
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ConfigError("self-loops are not allowed")
            if edges.min() < 0 or edges.max() >= self.node_count:
                raise ConfigError("edge endpoint outside node range")
            if len(np.unique(edges, axis=0)) != len(edges):
                raise ConfigError("multi-edges are not allowed")
        q = np.asarray(self.edge_q, dtype=float)
        p = np.asarray(self.edge_p, dtype=float)
        if q.shape != (len(edges),) or p.shape != (len(edges),):
            raise ConfigError("edge_q / edge_p must align with edges")
        if np.any((q < 0) | (q > 1)) or np.any((p < 0) | (p > 1)):
            raise DomainError("edge parameters must lie in [0, 1]")
        for name, arr in (("edges", edges), ("edge_q", q), ("edge_p", p)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "topology_tag", Topology(self.topology_tag))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def mean_degree(self) -> float:
        return 2.0 * self.edge_count / self.node_count

    @property
    def edge_concurrence(self) -> np.ndarray:
        return np.maximum(0.0, 1.0 - 1.5 * self.edge_q)

    @cached_property
    def adjacency(self) -> list[list[int]]:
        """Sorted neighbour lists."""
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.edges.tolist():
            adj[u].append(v)
            adj[v].append(u)
        for nb in adj:
            nb.sort()
        return adj

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {(u, v): i for i, (u, v) in enumerate(self.edges.tolist())}

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(u, v) if u < v else (v, u)]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.node_count))
        for (u, v), q, p in zip(self.edges.tolist(), self.edge_q, self.edge_p):
            g.add_edge(u, v, q=float(q), p=float(p))
        return g

    def with_edge_params(self, edge_q, edge_p) -> "QuantumNetwork":
        """Same topology with new edge parameters; cached lookups are shared."""
        q = np.array(edge_q, dtype=float)
        p = np.array(edge_p, dtype=float)
        if q.shape != (self.edge_count,) or p.shape != (self.edge_count,):
            raise ConfigError("edge_q / edge_p must align with edges")
        if np.any((q < 0) | (q > 1)) or np.any((p < 0) | (p > 1)):
            raise DomainError("edge parameters must lie in [0, 1]")
        q.setflags(write=False)
        p.setflags(write=False)
        self.adjacency, self.edge_index  # build once on the parent
        net = object.__new__(QuantumNetwork)
        net.__dict__.update(self.__dict__, edge_q=q, edge_p=p, params=dict(self.params))
        return net

    def largest_component(self) -> "QuantumNetwork":
        """Restrict to the largest connected component, relabelling nodes in order."""
        comps = list(nx.connected_components(self.to_networkx()))
        if not comps:
            return self
        keep = sorted(max(comps, key=lambda c: (len(c), -min(c))))
        relabel = -np.ones(self.node_count, dtype=np.int64)
        relabel[keep] = np.arange(len(keep))
        mask = relabel[self.edges[:, 0]] >= 0
        pos = None if self.node_positions is None else self.node_positions[keep]
        lengths = None if self.edge_length_km is None else self.edge_length_km[mask]
        params = dict(self.params, largest_component=True)
        return QuantumNetwork(
            len(keep), relabel[self.edges[mask]], self.edge_q[mask], self.edge_p[mask],
            self.topology_tag, pos, lengths, self.seed, params,
        )

    # -- serialisation -----------------------------------------------------

    def to_json_dict(self) -> dict[str, Any]:
        edges = []
        for i, (u, v) in enumerate(self.edges.tolist()):
            e = {"u": u, "v": v, "q": float(self.edge_q[i]), "p": float(self.edge_p[i])}
            if self.edge_length_km is not None:
                e["length_km"] = float(self.edge_length_km[i])
            edges.append(e)
        doc = {
            "nodes": self.node_count,
            "edges": edges,
            "topology_tag": self.topology_tag.value,
            "seed": self.seed,
            "params": self.params,
        }
        if self.node_positions is not None:
            doc["node_positions"] = self.node_positions.tolist()
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=1)

    @classmethod
    def from_json_dict(cls, doc: dict[str, Any]) -> "QuantumNetwork":
        edges = doc["edges"]
        lengths = None
        if edges and all("length_km" in e for e in edges):
            lengths = np.array([e["length_km"] for e in edges], dtype=float)
        pos = doc.get("node_positions")
        return cls(
            int(doc["nodes"]),
            np.array([[e["u"], e["v"]] for e in edges], dtype=np.int64).reshape(-1, 2),
            np.array([e["q"] for e in edges], dtype=float),
            np.array([e["p"] for e in edges], dtype=float),
            Topology(doc.get("topology_tag", "custom")),
            None if pos is None else np.asarray(pos, dtype=float),
            lengths,
            doc.get("seed"),
            dict(doc.get("params", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> "QuantumNetwork":
        return cls.from_json_dict(json.loads(text))


def from_edge_list(
    n: int, edges, q=0.0, p=1.0, topology_tag: Topology = Topology.CUSTOM, **kw
) -> QuantumNetwork:
    """Convenience constructor; scalar ``q``/``p`` are broadcast over edges."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    m = len(edges)
    return QuantumNetwork(
        n, edges, np.broadcast_to(np.asarray(q, float), (m,)).copy(),
        np.broadcast_to(np.asarray(p, float), (m,)).copy(), topology_tag, **kw,
    )


def _from_nx(g: nx.Graph, tag: Topology, seed, params, largest_component: bool):
    edges = np.array(sorted(tuple(sorted(e)) for e in g.edges()), dtype=np.int64)
    net = from_edge_list(g.number_of_nodes(), edges, 0.0, 1.0, tag, seed=seed, params=params)
    return net.largest_component() if largest_component else net


def build_erdos_renyi(
    n: int, mean_degree: float, seed: int, largest_component: bool = False
) -> QuantumNetwork:
    """G(n, p) with ``p = mean_degree / (n - 1)``."""
    if n < 2:
        raise ConfigError("n must be >= 2")
    if not 0 < mean_degree < n:
        raise ConfigError("need 0 < mean_degree < n")
    p = mean_degree / (n - 1)
    g = nx.fast_gnp_random_graph(n, p, seed=seed)
    params = {"n": n, "mean_degree": mean_degree}
    return _from_nx(g, Topology.ERDOS_RENYI, seed, params, largest_component)


def build_scale_free(n: int, m: int, seed: int) -> QuantumNetwork:
    """Barabasi-Albert preferential attachment; connected by construction."""
    if not (isinstance(m, (int, np.integer)) and 1 <= m < n):
        raise ConfigError(f"need integer 1 <= m < n, got m={m}, n={n}")
    g = nx.barabasi_albert_graph(n, int(m), seed=seed)
    return _from_nx(g, Topology.SCALE_FREE, seed, {"n": n, "m": int(m)}, False)


def build_lattice(rows: int, cols: int) -> QuantumNetwork:
    """Square lattice; nodes numbered row-major."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ConfigError("lattice needs at least two nodes")
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.append((i, i + 1))
            if r + 1 < rows:
                edges.append((i, i + cols))
    return from_edge_list(rows * cols, edges, 0.0, 1.0, Topology.LATTICE,
                          params={"rows": rows, "cols": cols})


def photonic_factor(z, gamma: float, n_p: float):
    """``1 - (1 - 10^(-gamma z / 10))^n_p``, stable for large ``n_p``."""
    z = np.asarray(z, dtype=float)
    t = np.power(10.0, -gamma * z / 10.0)
    with np.errstate(divide="ignore"):
        out = -np.expm1(n_p * np.log1p(-np.minimum(t, 1.0)))
    return np.where(t >= 1.0, 1.0, out)


def soft_rgg_edge_probability(z, two_alpha_r: float, gamma: float, n_p: float, beta: float = 1.0):
    return beta * np.exp(-np.asarray(z, float) / two_alpha_r) * photonic_factor(z, gamma, n_p)


def build_soft_rgg(
    n: int,
    R: float,
    alpha: float | None = None,
    gamma: float = 0.2,
    n_p: float = 1e6,
    seed: int = 0,
    beta: float = 1.0,
    largest_component: bool = False,
) -> QuantumNetwork:
    """Nodes uniform on a disc of radius ``R`` km; pairs joined with the photonic law.

    ``alpha`` defaults to ``226 / (2R)`` (typical edge length 226 km). Each
    edge's ``p`` is initialised to the photonic-connection factor of its length.
    """
    if n < 2:
        raise ConfigError("n must be >= 2")
    if R <= 0:
        raise ConfigError("R must be positive")
    if alpha is None:
        alpha = 226.0 / (2.0 * R)
    rng = np.random.default_rng(seed)
    radius = R * np.sqrt(rng.uniform(0.0, 1.0, n))
    theta = rng.uniform(0.0, 2 * np.pi, n)
    pos = np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])
    iu, iv = np.triu_indices(n, k=1)
    z = np.hypot(*(pos[iu] - pos[iv]).T)
    prob = soft_rgg_edge_probability(z, 2 * alpha * R, gamma, n_p, beta)
    keep = rng.uniform(0.0, 1.0, len(z)) < prob
    edges = np.column_stack([iu[keep], iv[keep]])
    lengths = z[keep]
    params = {"n": n, "R": R, "alpha": alpha, "gamma": gamma, "n_p": n_p, "beta": beta}
    net = QuantumNetwork(
        n, edges, np.zeros(len(edges)), photonic_factor(lengths, gamma, n_p),
        Topology.SOFT_RGG, pos, lengths, seed, params,
    )
    return net.largest_component() if largest_component else net


def assign_edge_states(
    network: QuantumNetwork,
    conc_dist: ParamDistribution,
    prob_dist: ParamDistribution,
    seed: int | np.random.Generator,
) -> QuantumNetwork:
    """Draw i.i.d. edge concurrence and availability from the given laws.

    Concurrence ``c`` maps to the mixing parameter ``q = 2(1 - c)/3``.
    """
    for name, d in (("conc_dist", conc_dist), ("prob_dist", prob_dist)):
        if d.minimum < -_EPS or d.maximum > 1 + _EPS:
            raise ConfigError(f"{name} support leaves [0, 1]")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    m = network.edge_count
    c = np.clip(conc_dist.sample(rng, m), 0.0, 1.0)
    p = np.clip(prob_dist.sample(rng, m), 0.0, 1.0)
    net = network.with_edge_params(2.0 * (1.0 - c) / 3.0, p)
    if isinstance(seed, np.random.Generator):
        seed = None
    net.params.update(conc_dist=conc_dist.to_dict(), prob_dist=prob_dist.to_dict(), assign_seed=seed)
    return net
