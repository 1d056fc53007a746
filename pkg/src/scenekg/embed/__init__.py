"""Graph embeddings: biased random walks, skip-gram training, and
segment-band link prediction in the 2-d embedding plane."""

from .clusters import assign_cluster, kmeans_centroids
from .linkpred import LinkReport, predict_links
from .sgns import BACKEND, EmbeddingSpace, dump_embedding, load_embedding, train
from .walks import WalkConfig, transition_weights, walk_corpus

__all__ = [
    "BACKEND",
    "EmbeddingSpace",
    "LinkReport",
    "WalkConfig",
    "assign_cluster",
    "dump_embedding",
    "kmeans_centroids",
    "load_embedding",
    "predict_links",
    "train",
    "transition_weights",
    "walk_corpus",
]
