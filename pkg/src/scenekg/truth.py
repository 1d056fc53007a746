"""Frequency/confidence truth values and the evidence calculus.

A truth value is a pair (f, w): f is the frequency of positive evidence,
w the total evidence weight. Confidence is derived as c = w / (w + K)
with evidential horizon K = 1, so c < 1 always and w = 0 gives the
vacuous value (c = 0).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyPremiseList

EVIDENTIAL_HORIZON = 1.0

# Tie-break order between competing labels: Product beats Shelf beats Other.
LABEL_PRIORITY = {"Product": 2, "Shelf": 1, "Other": 0}


@dataclass(frozen=True)
class TruthValue:
    f: float
    w: float

    def __post_init__(self):
        if not 0.0 <= self.f <= 1.0:
            raise ValueError(f"frequency out of range: {self.f}")
        if self.w < 0.0:
            raise ValueError(f"negative evidence weight: {self.w}")
        # canonicalize so serialized documents are byte-stable
        object.__setattr__(self, "f", float(self.f))
        object.__setattr__(self, "w", float(self.w))

    @property
    def c(self) -> float:
        return self.w / (self.w + EVIDENTIAL_HORIZON)

    @property
    def is_vacuous(self) -> bool:
        return self.w == 0.0

    @staticmethod
    def from_fc(f: float, c: float) -> "TruthValue":
        if not 0.0 <= c < 1.0:
            raise ValueError(f"confidence out of range: {c}")
        return TruthValue(f, c / (1.0 - c))


VACUOUS = TruthValue(0.0, 0.0)


def revise(t1: TruthValue, t2: TruthValue) -> TruthValue:
    """Pool evidence from two disjoint sources for the same statement."""
    if t2.is_vacuous:
        return t1
    if t1.is_vacuous:
        return t2
    w = t1.w + t2.w
    f = (t1.f * t1.w + t2.f * t2.w) / w
    return TruthValue(f, w)


def deduce(t1: TruthValue, t2: TruthValue) -> TruthValue:
    """Chain two statements; both frequency and confidence are discounted."""
    f = t1.f * t2.f
    c = f * t1.c * t2.c
    if c == 0.0:
        # f is annihilated too: a vacuous conclusion carries no frequency.
        return TruthValue(f, 0.0)
    return TruthValue(f, c / (1.0 - c))


def conjoin(truths) -> TruthValue:
    """Aggregate the premises of a multi-premise rule (product of f and c)."""
    truths = list(truths)
    if not truths:
        raise EmptyPremiseList("conjoin of zero premises")
    f = 1.0
    c = 1.0
    for t in truths:
        f *= t.f
        c *= t.c
    if c == 0.0:
        return TruthValue(f, 0.0)
    return TruthValue(f, c / (1.0 - c))


def expectation(t: TruthValue) -> float:
    return t.c * (t.f - 0.5) + 0.5


def claim_sort_key(label: str, truth: TruthValue):
    """Total order used by the choice rule; larger wins."""
    return (expectation(truth), truth.c, LABEL_PRIORITY[label])


def choose(claim1, claim2):
    """Pick between two competing (label, truth) claims for one subject."""
    return max(claim1, claim2, key=lambda cl: claim_sort_key(cl[0], cl[1]))
