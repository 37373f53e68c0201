"""Shortest, edge-disjoint and Pareto-optimal entanglement paths."""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .network import QuantumNetwork


@dataclass(frozen=True)
class PathRecord:
    """Path node sequence with its swapped-state and availability parameters."""

    nodes: tuple[int, ...]
    path_q: float
    path_probability: float

    @property
    def length(self) -> int:
        return len(self.nodes) - 1

    @property
    def path_concurrence(self) -> float:
        return max(0.0, 1.0 - 1.5 * self.path_q)

    @property
    def fidelity_factor(self) -> float:
        """``prod(1 - q_e)``; the unclipped quantity ordered by concurrence."""
        return 1.0 - self.path_q


def path_record(network: QuantumNetwork, nodes: Sequence[int]) -> PathRecord:
    keep, prob = 1.0, 1.0
    q, p = network.edge_q, network.edge_p
    for u, v in zip(nodes[:-1], nodes[1:]):
        i = network.edge_id(u, v)
        keep *= 1.0 - q[i]
        prob *= p[i]
    return PathRecord(tuple(int(x) for x in nodes), 1.0 - keep, prob)


def bfs_distances(adj: list[list[int]], s: int, stop_at: int | None = None) -> dict[int, int]:
    """Hop distances from ``s``; stops after the layer where ``stop_at`` appears."""
    dist = {s: 0}
    seen = {s}
    frontier = [s]
    k = 0
    while frontier:
        k += 1
        nxt = set()
        for u in frontier:
            nxt.update(adj[u])
        nxt -= seen
        seen |= nxt
        dist.update(dict.fromkeys(nxt, k))
        if stop_at in nxt:
            break
        frontier = nxt
    return dist


def _walk_down(adj: list[list[int]], to_d: dict[int, int], s: int, d: int) -> list[int] | None:
    """Smallest-first descent along ``to_d`` (distances *to* ``d``) from ``s``."""
    if s not in to_d:
        return None
    path = [s]
    u = s
    while u != d:
        want = to_d[u] - 1
        u = next(v for v in adj[u] if to_d.get(v) == want)  # adjacency is sorted
        path.append(u)
    return path


def lexicographic_path(adj: list[list[int]], dist: dict[int, int], s: int, d: int) -> list[int] | None:
    """Lexicographically smallest shortest path given BFS distances from ``s``.

    Nodes lying on some shortest path are collected by walking the BFS
    layers back from ``d``; the path is then rebuilt greedily from ``s``.
    """
    if d not in dist:
        return None
    on_path = {d}
    layer = [d]
    while layer:
        prev = set()
        for w in layer:
            dw = dist[w] - 1
            for u in adj[w]:
                if dist.get(u) == dw:
                    prev.add(u)
        on_path |= prev
        layer = list(prev)
    path = [s]
    u = s
    while u != d:
        du = dist[u] + 1
        for v in adj[u]:  # sorted, so the first hit is the smallest
            if v in on_path and dist.get(v) == du:
                u = v
                break
        path.append(u)
    return path


def _check_pair(network: QuantumNetwork, s: int, d: int):
    n = network.node_count
    if not (0 <= s < n and 0 <= d < n):
        raise ValueError(f"nodes ({s}, {d}) not in network")
    if s == d:
        raise ValueError("source and destination must differ")


def shortest_graph_path(network: QuantumNetwork, s: int, d: int) -> PathRecord | None:
    """Hop-count shortest path with lexicographic tie-break; ``None`` if disconnected."""
    _check_pair(network, s, d)
    adj = network.adjacency
    nodes = lexicographic_path(adj, bfs_distances(adj, s, stop_at=d), s, d)
    return None if nodes is None else path_record(network, nodes)


def _without(adj: list[list[int]], nodes: Sequence[int]) -> None:
    """Drop the edges of path ``nodes`` from ``adj`` in place (copying touched lists)."""
    for u, v in zip(nodes[:-1], nodes[1:]):
        adj[u] = [w for w in adj[u] if w != v]
        adj[v] = [w for w in adj[v] if w != u]


def edge_disjoint_paths(
    network: QuantumNetwork, s: int, d: int, k_max: int, first: PathRecord | None = None
) -> list[PathRecord]:
    """Greedy successive shortest paths, removing each found path's edges.

    ``first`` may pass an already computed shortest graph path.
    """
    _check_pair(network, s, d)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    adj = list(network.adjacency)
    out = []
    if first is not None:
        out.append(first)
        _without(adj, first.nodes)
    while len(out) < k_max:
        nodes = _walk_down(adj, bfs_distances(adj, d, stop_at=s), s, d)
        if nodes is None:
            break
        out.append(path_record(network, nodes))
        _without(adj, nodes)
    return out


@dataclass
class ParetoFront:
    """Non-dominated paths sorted by descending concurrence."""

    paths: list[PathRecord]
    truncated: bool = False

    def __iter__(self) -> Iterator[PathRecord]:
        return iter(self.paths)

    def __len__(self) -> int:
        return len(self.paths)

    def __getitem__(self, i):
        return self.paths[i]


def _dominates(a: tuple[float, float], b: tuple[float, float]) -> bool:
    return a[0] >= b[0] and a[1] >= b[1]


def pareto_paths(
    network: QuantumNetwork, s: int, d: int, max_labels: int = 10_000
) -> ParetoFront:
    """Label-correcting search for paths maximising (concurrence, probability).

    Labels are kept per node as ``(prod(1-q), prod p)`` pairs, which order
    paths exactly like concurrence and probability but never saturate at 0.
    A new label is dropped if an existing label at its node is at least as
    good in both; labels are expanded in (hops, node sequence) order so that
    among equal-valued paths the shortest, lexicographically first survives.
    Node revisits are forbidden.

    ``max_labels`` caps the label list of each node; when hit, further labels
    for that node are discarded and ``truncated`` is set.
    """
    _check_pair(network, s, d)
    adj = network.adjacency
    q, p = network.edge_q, network.edge_p
    labels: dict[int, list[tuple[float, float, tuple[int, ...]]]] = {s: [(1.0, 1.0, (s,))]}
    heap = [(0, (s,), 1.0, 1.0)]
    truncated = False
    while heap:
        hops, path, f, pr = heapq.heappop(heap)
        u = path[-1]
        if (f, pr, path) not in labels.get(u, ()):
            continue  # pruned after being queued
        if u == d:
            continue
        for v in adj[u]:
            if v in path:
                continue
            i = network.edge_id(u, v)
            val = (f * (1.0 - q[i]), pr * p[i])
            bucket = labels.setdefault(v, [])
            if any(_dominates(lab[:2], val) for lab in bucket):
                continue
            bucket[:] = [lab for lab in bucket if not _dominates(val, lab[:2])]
            if len(bucket) >= max_labels:
                truncated = True
                continue
            new_path = path + (v,)
            bucket.append((*val, new_path))
            heapq.heappush(heap, (hops + 1, new_path, *val))
    front = [PathRecord(lab[2], 1.0 - lab[0], lab[1]) for lab in labels.get(d, [])]
    front.sort(key=lambda r: (-r.fidelity_factor, -r.path_probability, r.length, r.nodes))
    return ParetoFront(front, truncated)


def all_simple_path_records(network: QuantumNetwork, s: int, d: int) -> Iterable[PathRecord]:
    """Every simple s-d path; exponential, intended for small graphs."""
    import networkx as nx

    for nodes in nx.all_simple_paths(network.to_networkx(), s, d):
        yield path_record(network, nodes)
