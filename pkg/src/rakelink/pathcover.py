"""Minimum path cover of the feasibility DAG via maximum bipartite matching.

Each service i is duplicated into a left vertex u_i (hands its rake onward)
and a right vertex v_i (receives one); every DAG edge (i -> j) becomes the
bipartite edge (u_i, v_j). A maximum matching of size nu chains nu pairs of
services onto shared rakes, so the minimum number of vertex-disjoint paths
covering all N services is N - nu.

Two matchers ship on purpose: the layered Hopcroft-Karp solver used
everywhere, and a single-path augmenting matcher kept as the slow,
obviously-correct oracle. Both are deterministic given the canonical edge
order, so matchings (not just their sizes) are reproducible byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .feasgraph import FeasibilityGraph, PairTable, build_graph
from .model import Bounds, Timetable, Topology, ValidationError, canonical_json


class InconsistentMatching(ValidationError):
    pass


class TooLarge(ValidationError):
    pass


@dataclass(frozen=True)
class Matching:
    """Left-to-right pairs, each endpoint used at most once."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class RakeLink:
    """Chronological service indices operated by one rake."""

    services: tuple[int, ...]


@dataclass(frozen=True)
class CoverSolution:
    """Vertex-disjoint rake-links jointly covering every service once."""

    links: tuple[RakeLink, ...]
    fleet_size: int
    bounds: Bounds


def hopcroft_karp(n_left: int, n_right: int, adj: list[list[int]]) -> tuple[int, list[int], list[int]]:
    """Maximum bipartite matching; returns (size, match_l, match_r).

    adj[u] lists the right neighbors of left vertex u in ascending order.
    A greedy seed pass plus fixed scan order makes the result deterministic.
    The augmenting DFS is iterative so recursion depth never limits the
    instance size.
    """
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    for u in range(n_left):
        for v in adj[u]:
            if match_r[v] == -1:
                match_l[u] = v
                match_r[v] = u
                break
    size = n_left - match_l.count(-1)

    unreachable = n_left + 1
    dist = [0] * n_left
    while True:
        # BFS: layer left vertices by alternating distance from a free one
        queue: list[int] = []
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = unreachable
        shortest = unreachable
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            du = dist[u]
            if du >= shortest:
                continue
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    if shortest == unreachable:
                        shortest = du + 1
                elif dist[w] == unreachable:
                    dist[w] = du + 1
                    queue.append(w)
        if shortest == unreachable:
            return size, match_l, match_r

        # DFS along the layering; ptr[u] persists within the phase so each
        # adjacency entry is scanned at most once per phase
        ptr = [0] * n_left
        for root in range(n_left):
            if match_l[root] != -1:
                continue
            stack = [root]
            rights: list[int] = []  # right vertex chosen between stack levels
            while stack:
                u = stack[-1]
                lst = adj[u]
                k = ptr[u]
                du1 = dist[u] + 1
                free_v = -1
                step = -1
                while k < len(lst):
                    v = lst[k]
                    k += 1
                    w = match_r[v]
                    if w == -1:
                        free_v = v
                        break
                    if dist[w] == du1:
                        step = v
                        break
                ptr[u] = k
                if free_v != -1:
                    # augment: flip the whole alternating path
                    match_l[u] = free_v
                    match_r[free_v] = u
                    for t in range(len(stack) - 2, -1, -1):
                        pu, pv = stack[t], rights[t]
                        match_l[pu] = pv
                        match_r[pv] = pu
                    size += 1
                    break
                if step != -1:
                    rights.append(step)
                    stack.append(match_r[step])
                    continue
                dist[u] = unreachable  # dead end for the rest of the phase
                stack.pop()
                if rights:
                    rights.pop()


def augmenting_path_matching(n_left: int, n_right: int, adj: list[list[int]]) -> tuple[int, list[int], list[int]]:
    """Single-path augmentation (the classic O(V*E) scheme); test oracle."""
    match_l = [-1] * n_left
    match_r = [-1] * n_right

    def try_augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if seen[v]:
                continue
            seen[v] = True
            w = match_r[v]
            if w == -1 or try_augment(w, seen):
                match_l[u] = v
                match_r[v] = u
                return True
        return False

    size = 0
    for u in range(n_left):
        if try_augment(u, [False] * n_right):
            size += 1
    return size, match_l, match_r


def max_bipartite_matching(g: FeasibilityGraph, method: str = "hopcroft-karp") -> Matching:
    """Maximum matching on the DAG's bipartite image, canonical pair order."""
    adj = g.successors()
    if method == "hopcroft-karp":
        _, match_l, _ = hopcroft_karp(g.n, g.n, adj)
    elif method == "augmenting":
        _, match_l, _ = augmenting_path_matching(g.n, g.n, adj)
    else:
        raise ValueError(f"unknown matching method {method!r}")
    pairs = tuple((u, v) for u, v in enumerate(match_l) if v != -1)
    return Matching(pairs=pairs)


def extract_cover(g: FeasibilityGraph, m: Matching) -> CoverSolution:
    """Chain matched pairs into rake-links; unmatched services start paths.

    The matching need not be maximum; any valid matching induces a cover of
    size N - |m|.
    """
    succ = [-1] * g.n
    pred = [-1] * g.n
    # membership by binary search on the canonically sorted edge arrays;
    # materializing an edge set would dwarf everything else on dense graphs
    starts = np.searchsorted(g.edge_from, np.arange(g.n + 1))
    edge_to = g.edge_to
    for u, v in m.pairs:
        if not (0 <= u < g.n and 0 <= v < g.n):
            raise InconsistentMatching(f"pair ({u}, {v}) is outside the service range")
        lo, hi = int(starts[u]), int(starts[u + 1])
        k = lo + int(np.searchsorted(edge_to[lo:hi], v))
        if k >= hi or int(edge_to[k]) != v:
            raise InconsistentMatching(f"pair ({u}, {v}) is not an edge of the graph")
        if succ[u] != -1:
            raise InconsistentMatching(f"left vertex {u} used twice")
        if pred[v] != -1:
            raise InconsistentMatching(f"right vertex {v} used twice")
        succ[u] = v
        pred[v] = u
    links = []
    for start in range(g.n):
        if pred[start] == -1:
            path = [start]
            cur = start
            while succ[cur] != -1:
                cur = succ[cur]
                path.append(cur)
            links.append(RakeLink(services=tuple(path)))
    return CoverSolution(links=tuple(links), fleet_size=len(links), bounds=g.bounds)


def min_fleet(tt: Timetable, topo: Topology, bounds: Bounds, *, table: PairTable | None = None) -> CoverSolution:
    """Smallest number of rakes that can run the whole timetable."""
    g = build_graph(tt, topo, bounds, table=table)
    return extract_cover(g, max_bipartite_matching(g))


def brute_force_min_cover(g: FeasibilityGraph) -> int:
    """Exhaustive minimum path cover size; independent oracle for small n.

    Searches every successor assignment (each node at most one successor
    along a graph edge, each node at most one predecessor); the cover size
    is n minus the number of chained pairs.
    """
    if g.n > 12:
        raise TooLarge(f"brute force is capped at 12 nodes, got {g.n}")
    succs = g.successors()
    n = g.n
    best = n
    taken = [False] * n

    def walk(u: int, chained: int) -> None:
        nonlocal best
        if u - chained >= best:  # even chaining every remaining node cannot win
            return
        if u == n:
            best = min(best, n - chained)
            return
        for v in succs[u]:
            if not taken[v]:
                taken[v] = True
                walk(u + 1, chained + 1)
                taken[v] = False
        walk(u + 1, chained)

    walk(0, 0)
    return best


def cover_json(sol: CoverSolution, tt: Timetable) -> str:
    ids = tt.service_ids()
    doc = {
        "fleet_size": sol.fleet_size,
        "links": [[ids[k] for k in link.services] for link in sol.links],
        "bounds": sol.bounds.as_dict(),
    }
    return canonical_json(doc)


def cover_from_json(text: str, tt: Timetable) -> CoverSolution:
    doc = json.loads(text)
    index = {sid: k for k, sid in enumerate(tt.service_ids())}
    links = tuple(RakeLink(services=tuple(index[sid] for sid in link)) for link in doc["links"])
    return CoverSolution(links=links, fleet_size=doc["fleet_size"], bounds=Bounds.from_dict(doc["bounds"]))


def cover_csv(sol: CoverSolution, tt: Timetable) -> str:
    ids = tt.service_ids()
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["rake_index", "seq", "service_id"])
    for r, link in enumerate(sol.links, start=1):
        for q, k in enumerate(link.services, start=1):
            writer.writerow([r, q, ids[k]])
    return out.getvalue()
