"""Weighted undirected graph plus the network algorithms the metrics need.

Conventions fixed here (and recorded in report provenance):
  * average path length uses hop-count distances; unreachable pairs
    contribute distance n (the node count),
  * nodes with degree < 2 contribute 0 to the weighted clustering average,
  * logarithms are natural logarithms,
  * Louvain visits nodes in a seed-keyed shuffled order and breaks
    modularity-gain ties toward the smallest community id, so runs are
    reproducible.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from typing import Dict, Hashable, Iterator, List, Set, Tuple

from .errors import EmptyGraph, TooFewNodes

Node = Hashable


class WeightedGraph:
    """Simple undirected graph with positive edge weights.

    No self-loops, no parallel edges; a zero weight means "no edge".
    Intended to be immutable once handed to the algorithms below.
    """

    def __init__(self) -> None:
        self._adj: Dict[Node, Dict[Node, float]] = {}

    def add_node(self, u: Node) -> None:
        self._adj.setdefault(u, {})

    def add_edge(self, u: Node, v: Node, weight: float) -> None:
        if u == v:
            raise ValueError(f"self-loop on {u!r}")
        if weight <= 0:
            raise ValueError(f"non-positive weight {weight!r} on ({u!r}, {v!r})")
        if v in self._adj.get(u, {}):
            raise ValueError(f"parallel edge ({u!r}, {v!r})")
        self._adj.setdefault(u, {})[v] = float(weight)
        self._adj.setdefault(v, {})[u] = float(weight)

    @property
    def nodes(self) -> List[Node]:
        return list(self._adj)

    @property
    def node_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2

    def has_node(self, u: Node) -> bool:
        return u in self._adj

    def has_edge(self, u: Node, v: Node) -> bool:
        return v in self._adj.get(u, {})

    def weight(self, u: Node, v: Node) -> float:
        return self._adj[u][v]

    def neighbors(self, u: Node) -> List[Node]:
        return list(self._adj[u])

    def degree(self, u: Node) -> int:
        return len(self._adj[u])

    def strength(self, u: Node) -> float:
        return sum(self._adj[u].values())

    def edges(self) -> Iterator[Tuple[Node, Node, float]]:
        seen: Set[Node] = set()
        for u, nbrs in self._adj.items():
            for v, w in nbrs.items():
                if v not in seen:
                    yield u, v, w
            seen.add(u)

    def edge_weights(self) -> List[float]:
        return [w for _, _, w in self.edges()]


def connected_components(g: WeightedGraph) -> List[Set[Node]]:
    """Maximal connected node sets, ordered by their smallest member."""
    seen: Set[Node] = set()
    components: List[Set[Node]] = []
    for start in g.nodes:
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if v not in comp:
                    comp.add(v)
                    queue.append(v)
        seen |= comp
        components.append(comp)
    components.sort(key=lambda c: min(map(_sort_key, c)))
    return components


def _sort_key(node: Node):
    return (type(node).__name__, repr(node))


def local_weighted_clustering(g: WeightedGraph, u: Node) -> float:
    """Barrat weighted clustering coefficient of one node.

    wc_u = 1 / (s_u (k_u - 1)) * sum over closed triads (u, h, k) of
    (w_uh + w_uk) / 2. Degree < 2 contributes 0 (the formula is 0/0 there).
    """
    k = g.degree(u)
    if k < 2:
        return 0.0
    s = g.strength(u)
    nbrs = g.neighbors(u)
    acc = 0.0
    for i, h in enumerate(nbrs):
        w_uh = g.weight(u, h)
        for v in nbrs[i + 1:]:
            if g.has_edge(h, v):
                acc += w_uh + g.weight(u, v)  # both (h,v) orders, halved once
    return acc / (s * (k - 1))


def weighted_clustering(g: WeightedGraph) -> float:
    """Barrat coefficient averaged over all nodes (0 for an empty graph)."""
    n = g.node_count
    if n == 0:
        return 0.0
    return sum(local_weighted_clustering(g, u) for u in g.nodes) / n


def _bfs_hops(g: WeightedGraph, source: Node) -> Dict[Node, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def average_path_length(g: WeightedGraph) -> float:
    """Mean hop-count distance over unordered node pairs.

    Unreachable pairs contribute distance n, keeping the metric finite
    on disconnected graphs.
    """
    n = g.node_count
    if n < 2:
        raise TooFewNodes(f"average_path_length needs n >= 2, got {n}")
    nodes = g.nodes
    index = {u: i for i, u in enumerate(nodes)}
    total = 0.0
    for u in nodes:
        dist = _bfs_hops(g, u)
        iu = index[u]
        for v in nodes:
            if index[v] > iu:
                total += dist.get(v, n)
    return 2.0 * total / (n * (n - 1))


def count_k4(g: WeightedGraph) -> int:
    """Exact number of 4-cliques, via degeneracy-ordered enumeration.

    Weights are ignored; only edge presence matters.
    """
    order = _degeneracy_order(g)
    rank = {u: i for i, u in enumerate(order)}
    # later[u]: neighbors of u that come after u in the ordering
    later = {
        u: sorted((v for v in g.neighbors(u) if rank[v] > rank[u]), key=rank.get)
        for u in order
    }
    count = 0
    for u in order:
        cand = later[u]
        cand_set = set(cand)
        for i, a in enumerate(cand):
            common_ab = [b for b in later[a] if b in cand_set]
            for j, b in enumerate(common_ab):
                for c in common_ab[j + 1:]:
                    if g.has_edge(b, c):
                        count += 1
    return count


def _degeneracy_order(g: WeightedGraph) -> List[Node]:
    # repeatedly remove a minimum-residual-degree node; quadratic but the
    # graphs here (section layers, metagraphs) are small
    degree = {u: g.degree(u) for u in g.nodes}
    remaining = set(g.nodes)
    order: List[Node] = []
    while remaining:
        u = min(remaining, key=lambda x: (degree[x], _sort_key(x)))
        order.append(u)
        remaining.remove(u)
        for v in g.neighbors(u):
            if v in remaining:
                degree[v] -= 1
    return order


@dataclass(frozen=True)
class CommunityPartition:
    assignment: Dict[Node, int]
    modularity: float

    def communities(self) -> Dict[int, Set[Node]]:
        out: Dict[int, Set[Node]] = {}
        for node, cid in self.assignment.items():
            out.setdefault(cid, set()).add(node)
        return out


def modularity(g: WeightedGraph, assignment: Dict[Node, int]) -> float:
    """Weighted Newman modularity of a node-to-community assignment."""
    m = sum(g.edge_weights())
    if m == 0:
        return 0.0
    q = 0.0
    for u, v, w in g.edges():
        if assignment[u] == assignment[v]:
            q += w / m
    strength_by_comm: Dict[int, float] = {}
    for u in g.nodes:
        cid = assignment[u]
        strength_by_comm[cid] = strength_by_comm.get(cid, 0.0) + g.strength(u)
    for s in strength_by_comm.values():
        q -= (s / (2.0 * m)) ** 2
    return q


_LOUVAIN_RESTARTS = 8


def louvain(g: WeightedGraph, seed: int) -> CommunityPartition:
    """Two-phase Louvain modularity optimization on edge weights.

    Runs a fixed number of restarts with seed-derived shuffle orders and
    keeps the best partition; within a pass, modularity-gain ties break
    toward the smallest community id. Both choices exist purely for
    reproducibility.
    """
    if g.node_count == 0:
        raise EmptyGraph("louvain on empty graph")
    if g.edge_count == 0:
        nodes = sorted(g.nodes, key=_sort_key)
        assignment = {u: i for i, u in enumerate(nodes)}
        return CommunityPartition(assignment=assignment, modularity=0.0)
    best = None
    for restart in range(_LOUVAIN_RESTARTS):
        part = _louvain_once(g, seed * _LOUVAIN_RESTARTS + restart)
        if best is None or part.modularity > best.modularity + 1e-12:
            best = part
    return best


def _louvain_once(g: WeightedGraph, seed: int) -> CommunityPartition:
    nodes = sorted(g.nodes, key=_sort_key)
    rng = random.Random(seed)
    # working representation: integer nodes, separate self-loop weights
    idx = {u: i for i, u in enumerate(nodes)}
    adj: List[Dict[int, float]] = [dict() for _ in nodes]
    for u, v, w in g.edges():
        adj[idx[u]][idx[v]] = w
        adj[idx[v]][idx[u]] = w
    loops = [0.0] * len(nodes)
    membership = list(range(len(nodes)))  # original node -> current supernode

    while True:
        comm = _louvain_pass(adj, loops, rng)
        n_comms = len(set(comm))
        if n_comms == len(adj):
            break
        # relabel communities densely, ordered by community id
        relabel = {cid: i for i, cid in enumerate(sorted(set(comm)))}
        comm = [relabel[c] for c in comm]
        membership = [comm[m] for m in membership]
        adj, loops = _aggregate(adj, loops, comm, n_comms)

    final_ids = sorted(set(membership))
    relabel = {cid: i for i, cid in enumerate(final_ids)}
    assignment = {u: relabel[membership[idx[u]]] for u in nodes}
    return CommunityPartition(assignment=assignment, modularity=modularity(g, assignment))


def _louvain_pass(adj: List[Dict[int, float]], loops: List[float],
                  rng: random.Random) -> List[int]:
    n = len(adj)
    strength = [sum(adj[i].values()) + 2.0 * loops[i] for i in range(n)]
    m = (sum(sum(a.values()) for a in adj) / 2.0) + sum(loops)
    comm = list(range(n))
    sigma_tot = strength[:]

    order = list(range(n))
    improved = True
    while improved:
        improved = False
        rng.shuffle(order)
        for i in order:
            old = comm[i]
            # weights from i to each neighboring community
            w_to: Dict[int, float] = {old: 0.0}
            for j, w in adj[i].items():
                w_to[comm[j]] = w_to.get(comm[j], 0.0) + w
            sigma_tot[old] -= strength[i]
            best_comm, best_gain = old, _gain(w_to.get(old, 0.0), sigma_tot[old],
                                              strength[i], m)
            for cid in sorted(w_to):
                if cid == old:
                    continue
                gain = _gain(w_to[cid], sigma_tot[cid], strength[i], m)
                if gain > best_gain + 1e-12 or (
                        abs(gain - best_gain) <= 1e-12 and cid < best_comm):
                    best_comm, best_gain = cid, gain
            comm[i] = best_comm
            sigma_tot[best_comm] += strength[i]
            if best_comm != old:
                improved = True
    return comm


def _gain(w_in: float, sigma_tot: float, k_i: float, m: float) -> float:
    # modularity change of inserting an isolated node into a community,
    # up to terms independent of the candidate community
    return w_in / m - sigma_tot * k_i / (2.0 * m * m)


def _aggregate(adj: List[Dict[int, float]], loops: List[float],
               comm: List[int], n_comms: int):
    new_adj: List[Dict[int, float]] = [dict() for _ in range(n_comms)]
    new_loops = [0.0] * n_comms
    for i, loop in enumerate(loops):
        new_loops[comm[i]] += loop
    for i in range(len(adj)):
        ci = comm[i]
        for j, w in adj[i].items():
            if j < i:
                continue
            cj = comm[j]
            if ci == cj:
                new_loops[ci] += w
            else:
                new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + w
                new_adj[cj][ci] = new_adj[cj].get(ci, 0.0) + w
    return new_adj, new_loops
