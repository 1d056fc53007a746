"""Speed comparison of the compiled and pure-Python SGNS kernels.

Both kernels produce bit-identical embeddings (enforced by the test
suite); this script measures the speedup of the compiled one on a
walk corpus from a two-clique graph.

Usage: python benchmarks/bench_sgns.py [repeats]
"""

import itertools
import sys
import time

from scenekg.embed import WalkConfig, walk_corpus
from scenekg.embed import _sgns_pure
from scenekg.kg import ANTI_SYMMETRIC, L1, KnowledgeGraph
from scenekg.truth import TruthValue

try:
    from scenekg.embed import _sgns_cy
except ImportError:
    _sgns_cy = None


def build_corpus():
    g = KnowledgeGraph()
    ids = {}
    edges = []
    left = [f"l{i}" for i in range(15)]
    right = [f"r{i}" for i in range(15)]
    for group in (left, right):
        edges.extend(itertools.combinations(group, 2))
    edges.append((left[0], right[0]))
    for a, b in edges:
        for name in (a, b):
            if name not in ids:
                ids[name] = g.add_node(L1, "Percept", name)
        g.assert_relation(ids[a], "rel", ids[b], ANTI_SYMMETRIC,
                          TruthValue(1.0, 1.0), "t")
    return walk_corpus(g, WalkConfig(num_walks=10, walk_length=40))


def kernel_args(corpus):
    vocab = sorted({n for walk in corpus for n in walk})
    index = {n: i for i, n in enumerate(vocab)}
    sentences = [[index[n] for n in walk] for walk in corpus]
    counts = [0] * len(vocab)
    for sent in sentences:
        for w in sent:
            counts[w] += 1
    neg_cum = []
    running = 0.0
    for c in counts:
        running += c ** 0.75
        neg_cum.append(running)
    return (sentences, len(vocab), 2, 5, 5, 5, 0.025, 0, neg_cum)


def bench(kernel, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        kernel.train_kernel(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    args = kernel_args(build_corpus())
    t_pure = bench(_sgns_pure, args, repeats)
    print(f"pure-python kernel: {t_pure * 1000:8.1f} ms")
    if _sgns_cy is None:
        print("compiled kernel unavailable (build the extension first)")
        return
    t_cy = bench(_sgns_cy, args, repeats)
    print(f"compiled kernel:    {t_cy * 1000:8.1f} ms")
    print(f"speedup:            {t_pure / t_cy:8.1f}x")
    flat_cy, _ = _sgns_cy.train_kernel(*args)
    flat_py, _ = _sgns_pure.train_kernel(*args)
    identical = list(flat_cy) == list(flat_py)
    print(f"bit-identical:      {identical}")


if __name__ == "__main__":
    main()
