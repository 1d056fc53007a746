"""Seeded k-means over an embedding space, ties resolved to lowest index."""

from __future__ import annotations

import math
import random

from ..errors import TooFewPoints
from .sgns import EmbeddingSpace

MAX_ITER = 100


def _nearest(centroids, vector) -> int:
    best = 0
    best_dist = math.dist(centroids[0], vector)
    for i in range(1, len(centroids)):
        dist = math.dist(centroids[i], vector)
        if dist < best_dist:
            best, best_dist = i, dist
    return best


def kmeans_centroids(space: EmbeddingSpace, k: int, rng_seed: int = 0) -> list:
    points = [tuple(space.vectors[node]) for node in sorted(space.vectors)]
    distinct = sorted(set(points))
    if k < 1 or k > len(distinct):
        raise TooFewPoints(
            f"need at least {k} distinct vectors, have {len(distinct)}")
    rng = random.Random(rng_seed)
    centroids = [list(p) for p in rng.sample(distinct, k)]
    dim = len(points[0])
    for _ in range(MAX_ITER):
        sums = [[0.0] * dim for _ in range(k)]
        counts = [0] * k
        for point in points:
            i = _nearest(centroids, point)
            counts[i] += 1
            for d in range(dim):
                sums[i][d] += point[d]
        updated = [
            [sums[i][d] / counts[i] for d in range(dim)] if counts[i]
            else centroids[i]
            for i in range(k)
        ]
        if updated == centroids:
            break
        centroids = updated
    return centroids


def assign_cluster(centroids, vector) -> int:
    """Index of the nearest centroid (Euclidean, ties to lowest index)."""
    return _nearest(centroids, list(vector))
