"""Skip-gram-with-negative-sampling training over walk corpora.

The inner training loop has two interchangeable kernels: a compiled
Cython extension and a pure-Python fallback. The compiled kernel is
preferred when present; set SCENEKG_PURE_PYTHON=1 to force the fallback.
Both produce bit-identical embeddings (see benchmarks/bench_sgns.py for
the speed comparison).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from ..errors import EmptyCorpus, MalformedDocument
from . import _sgns_pure

if os.environ.get("SCENEKG_PURE_PYTHON") == "1":
    _kernel = _sgns_pure
    BACKEND = "pure"
else:
    try:
        from . import _sgns_cy as _kernel
        BACKEND = "cython"
    except ImportError:
        _kernel = _sgns_pure
        BACKEND = "pure"

NEG_EXPONENT = 0.75


@dataclass
class EmbeddingSpace:
    dim: int
    vectors: dict  # node id -> list[float]

    def __contains__(self, node_id):
        return node_id in self.vectors


def train(corpus, dim: int = 2, window: int = 5, negatives: int = 5,
          epochs: int = 5, lr: float = 0.025, rng_seed: int = 0,
          return_losses: bool = False):
    """Train node vectors on a walk corpus; deterministic given the seed."""
    corpus = [walk for walk in corpus if walk]
    if not corpus:
        raise EmptyCorpus("no walks to train on")
    vocab = sorted({node for walk in corpus for node in walk})
    index = {node: i for i, node in enumerate(vocab)}
    counts = [0] * len(vocab)
    sentences = []
    for walk in corpus:
        sent = [index[node] for node in walk]
        sentences.append(sent)
        for word in sent:
            counts[word] += 1
    neg_cum = []
    running = 0.0
    for count in counts:
        running += count ** NEG_EXPONENT
        neg_cum.append(running)
    flat, losses = _kernel.train_kernel(
        sentences, len(vocab), dim, window, negatives, epochs, lr,
        rng_seed & 0xFFFFFFFFFFFFFFFF, neg_cum)
    vectors = {
        node: [flat[i * dim + d] for d in range(dim)]
        for node, i in index.items()
    }
    space = EmbeddingSpace(dim, vectors)
    if return_losses:
        return space, losses
    return space


# --- dump format: one line per node, `id v1 v2 ... vd` ---

def dump_embedding(space: EmbeddingSpace) -> bytes:
    lines = []
    for node in sorted(space.vectors):
        coords = " ".join(f"{v:.6f}" for v in space.vectors[node])
        lines.append(f"{node} {coords}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_embedding(data: bytes) -> EmbeddingSpace:
    vectors = {}
    dim = None
    try:
        for line in data.decode("utf-8").splitlines():
            if not line.strip():
                continue
            parts = line.split()
            node, coords = parts[0], [float(v) for v in parts[1:]]
            if not coords:
                raise MalformedDocument(f"no coordinates for {node!r}")
            if dim is None:
                dim = len(coords)
            elif len(coords) != dim:
                raise MalformedDocument(f"mixed dimensions at {node!r}")
            vectors[node] = coords
    except (UnicodeDecodeError, ValueError) as exc:
        raise MalformedDocument(f"not an embedding dump: {exc}") from exc
    if dim is None:
        raise MalformedDocument("empty embedding dump")
    return EmbeddingSpace(dim, vectors)
