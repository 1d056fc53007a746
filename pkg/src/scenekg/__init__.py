"""scenekg: leveled knowledge graphs, spatial relation extraction,
evidence-based rule reasoning with focus-of-attention covers, and graph
embeddings, plus an experiment harness over synthetic shelf scenes."""

from .kg import (
    ANTI_SYMMETRIC,
    L0,
    L1,
    L2,
    LSTAR,
    SYMMETRIC,
    KnowledgeGraph,
    Level,
    merge,
)
from .truth import VACUOUS, TruthValue, choose, conjoin, deduce, expectation, revise

__version__ = "0.1.0"

__all__ = [
    "ANTI_SYMMETRIC",
    "KnowledgeGraph",
    "L0",
    "L1",
    "L2",
    "LSTAR",
    "Level",
    "SYMMETRIC",
    "TruthValue",
    "VACUOUS",
    "choose",
    "conjoin",
    "deduce",
    "expectation",
    "merge",
    "revise",
]
