import random

import pytest

from scenekg.embed import EmbeddingSpace, assign_cluster, kmeans_centroids
from scenekg.errors import TooFewPoints


def _space(points):
    return EmbeddingSpace(2, {k: list(v) for k, v in points.items()})


def test_k1_is_mean():
    space = _space({"a": (0, 0), "b": (2, 0), "c": (1, 3)})
    (centroid,) = kmeans_centroids(space, 1, rng_seed=0)
    assert centroid == pytest.approx([1.0, 1.0])


def test_too_few_distinct_points():
    space = _space({"a": (1, 1), "b": (1, 1)})
    with pytest.raises(TooFewPoints):
        kmeans_centroids(space, 2, rng_seed=0)


def test_two_blobs_separate():
    rng = random.Random(0)
    points = {}
    for i in range(20):
        points[f"a{i}"] = (rng.gauss(0, 0.1), rng.gauss(0, 0.1))
        points[f"b{i}"] = (rng.gauss(10, 0.1), rng.gauss(10, 0.1))
    space = _space(points)
    centroids = kmeans_centroids(space, 2, rng_seed=1)
    clusters = {name: assign_cluster(centroids, vec)
                for name, vec in space.vectors.items()}
    a_clusters = {clusters[f"a{i}"] for i in range(20)}
    b_clusters = {clusters[f"b{i}"] for i in range(20)}
    assert len(a_clusters) == 1 and len(b_clusters) == 1
    assert a_clusters != b_clusters


def test_assign_existing_centroid():
    space = _space({"a": (0, 0), "b": (2, 0), "c": (10, 10), "d": (12, 10)})
    centroids = kmeans_centroids(space, 2, rng_seed=3)
    for idx, centroid in enumerate(centroids):
        assert assign_cluster(centroids, centroid) == idx


def test_deterministic():
    rng = random.Random(9)
    space = _space({f"p{i}": (rng.random(), rng.random()) for i in range(30)})
    assert (kmeans_centroids(space, 3, rng_seed=4)
            == kmeans_centroids(space, 3, rng_seed=4))
