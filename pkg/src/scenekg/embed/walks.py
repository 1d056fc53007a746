"""Second-order biased random walks over a knowledge graph.

Edge direction is ignored while walking: the relation graphs this runs on
are sparse and directed, and undirected traversal maximizes corpus
connectivity. Per-walk seeds are derived from (master seed, start node,
walk index), so walks can be generated in any order or in parallel
without changing the corpus.
"""

from __future__ import annotations

import hashlib
import random
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate

from ..errors import ConfigInvalid, IsolatedNode
from ..kg import KnowledgeGraph


@dataclass(frozen=True)
class WalkConfig:
    num_walks: int = 10
    walk_length: int = 20
    p: float = 1.0
    q: float = 1.0
    rng_seed: int = 0

    def check(self):
        if self.num_walks < 1 or self.walk_length < 1:
            raise ConfigInvalid("num_walks and walk_length must be positive")
        if self.p <= 0 or self.q <= 0:
            raise ConfigInvalid("p and q must be > 0")


def adjacency(graph: KnowledgeGraph) -> dict:
    """Undirected adjacency over relation edges, neighbors sorted."""
    adj = {node_id: set() for node_id in graph.nodes}
    for edge in graph.edges.values():
        adj[edge.src].add(edge.dst)
        adj[edge.dst].add(edge.src)
    return {node: sorted(nbrs - {node}) for node, nbrs in adj.items()}


def _weights(neighbors, prev, prev_neighbors, p, q):
    if prev is None:
        return [1.0] * len(neighbors)
    out = []
    for nbr in neighbors:
        if nbr == prev:
            out.append(1.0 / p)
        elif nbr in prev_neighbors:
            out.append(1.0)
        else:
            out.append(1.0 / q)
    return out


def transition_weights(graph: KnowledgeGraph, prev, cur, p, q) -> dict:
    """Unnormalized step weights out of `cur`, having arrived from `prev`."""
    adj = adjacency(graph)
    neighbors = adj.get(cur, [])
    if not neighbors:
        raise IsolatedNode(cur)
    prev_neighbors = set(adj.get(prev, ())) if prev is not None else set()
    return dict(zip(neighbors,
                    _weights(neighbors, prev, prev_neighbors, p, q)))


def _walk_seed(master_seed: int, node: str, walk_index: int) -> int:
    payload = f"{master_seed}:{node}:{walk_index}".encode()
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(),
                          "big")


def _one_walk(adj, start, length, p, q, rng):
    walk = [start]
    while len(walk) < length:
        cur = walk[-1]
        neighbors = adj[cur]
        if not neighbors:
            break
        prev = walk[-2] if len(walk) > 1 else None
        prev_neighbors = set(adj[prev]) if prev is not None else set()
        weights = _weights(neighbors, prev, prev_neighbors, p, q)
        cumulative = list(accumulate(weights))
        pick = rng.random() * cumulative[-1]
        idx = min(bisect_right(cumulative, pick), len(neighbors) - 1)
        walk.append(neighbors[idx])
    return walk


def walk_corpus(graph: KnowledgeGraph, cfg: WalkConfig) -> list:
    cfg.check()
    adj = adjacency(graph)
    corpus = []
    for node in sorted(graph.nodes):
        for walk_index in range(cfg.num_walks):
            rng = random.Random(_walk_seed(cfg.rng_seed, node, walk_index))
            corpus.append(_one_walk(adj, node, cfg.walk_length,
                                    cfg.p, cfg.q, rng))
    return corpus
