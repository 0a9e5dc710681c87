"""Brute-force reference implementations used by the randomized tests."""

from __future__ import annotations

import random

from vulnapi.callgraph import CallGraph
from vulnapi.model import MethodId


def node(i: int) -> MethodId:
    return MethodId(f"p.C{i // 10}", f"m{i:02d}", ())


def random_graph(r: random.Random, max_nodes: int = 50, cyclic: bool | None = None) -> CallGraph:
    """Random call graph; ``cyclic`` forces (or forbids) at least one back edge."""
    k = r.randint(2, max_nodes)
    ids = [node(i) for i in range(k)]
    p = r.uniform(0.5, 3.0) / k
    edges = set()
    for a in range(k):
        for b in range(a + 1, k):
            if r.random() < p:
                edges.add((ids[a], ids[b]))
    if cyclic is None:
        cyclic = r.random() < 0.5
    if cyclic:
        for i in range(r.randint(1, 4)):
            a, b = sorted(r.sample(range(k), 2))
            edges.add((ids[b], ids[a]))
            if i == 0:
                edges.add((ids[a], ids[b]))  # guarantees at least one cycle
        if r.random() < 0.2:
            s = r.randrange(k)
            edges.add((ids[s], ids[s]))
    return CallGraph(ids, edges)


def has_cycle(cg: CallGraph) -> bool:
    closure = reach_matrix(cg)
    return any(closure[m][m] for m in closure)


def reach_matrix(cg: CallGraph) -> dict:
    """reach[a][b] is True iff a path of length >= 1 leads from a to b (Warshall)."""
    nodes = sorted(cg.nodes)
    reach = {a: {b: cg.has_edge(a, b) for b in nodes} for a in nodes}
    for k in nodes:
        for i in nodes:
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in nodes:
                    if row_k[j]:
                        row_i[j] = True
    return reach


def brute_backward(cg: CallGraph, roots) -> set:
    reach = reach_matrix(cg)
    roots = {r for r in roots if r in cg.nodes}
    return set(roots) | {m for m in cg.nodes if any(reach[m][r] for r in roots)}


def augment_oracle(m0: MethodId, p_cg: CallGraph, v_cg: CallGraph, per_layer: bool = False) -> set:
    """Layered definition of the augmentation search.

    Layer 0 is {m0}; layer k+1 holds the callers of layer-k methods that are
    absent from the vulnerable graph and were not seen in earlier layers.
    Within a layer, methods are ordered by the position of their first caller
    edge from the previous layer, then by id. The answer is taken from the
    first layer whose methods have callers present in the vulnerable graph:
    all of them with ``per_layer``, otherwise those of the first such method.
    """
    every_caller = {m: sorted(a for a, b in p_cg.edges if b == m) for m in p_cg.nodes}
    layer, seen = [m0], {m0}
    while layer:
        hits = [[c for c in every_caller[m] if c in v_cg.nodes] for m in layer]
        if any(hits):
            if per_layer:
                return {c for h in hits for c in h}
            return set(next(h for h in hits if h))
        rank = {}
        for pos, m in enumerate(layer):
            for c in every_caller[m]:
                if c not in v_cg.nodes and c not in seen:
                    rank.setdefault(c, pos)
        layer = sorted(rank, key=lambda c: (rank[c], c))
        seen |= set(layer)
    return set()


def random_augment_case(r: random.Random, max_nodes: int = 50):
    """(m0, p_cg, v_cg) with m0 only in the patch graph."""
    p_cg = random_graph(r, max_nodes)
    nodes = sorted(p_cg.nodes)
    m0 = r.choice(nodes)
    keep_rate = r.uniform(0.05, 0.7)
    v_nodes = [m for m in nodes if m != m0 and r.random() < keep_rate]
    v_set = set(v_nodes)
    v_edges = [(a, b) for a, b in p_cg.edges if a in v_set and b in v_set and r.random() < 0.8]
    return m0, p_cg, CallGraph(v_nodes, v_edges)


def brute_version_pair(rng_pred, versions):
    """Try every ordered pair; the answer maximizes v_i then minimizes v_j."""
    best = None
    for vi in versions:
        if not rng_pred(vi):
            continue
        for vj in versions:
            if vj > vi and not rng_pred(vj):
                if best is None or vi > best[0] or (vi == best[0] and vj < best[1]):
                    best = (vi, vj)
    # a later vulnerable version without any successor patch still wins v_i
    top = max((v for v in versions if rng_pred(v)), default=None)
    if top is None or best is None or best[0] != top:
        return None
    return best
