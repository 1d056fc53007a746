"""Hidden-link candidates along the segment between two embedded nodes.

The band around the line through the two query vectors is handled
parametrically, so vertical segments need no special casing: a node is a
member when its perpendicular foot falls inside the segment and its
distance to the segment is within the current epsilon. The segment is
split into four equal quarters; epsilon grows additively until every
quarter is inhabited or the guard cap is reached.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from ..errors import (
    ConfigInvalid,
    IdenticalEndpoints,
    MalformedDocument,
    NotTwoDimensional,
)
from .sgns import EmbeddingSpace


@dataclass
class LinkReport:
    n1: str
    n2: str
    line: dict          # {"a": slope, "b": intercept} or {"vertical": x0}
    eps_final: float
    members: list       # node ids inside the final band, n1/n2 excluded
    quadrant_counts: list
    skew_index: float | None

    def to_doc(self):
        return {
            "n1": self.n1,
            "n2": self.n2,
            "line": self.line,
            "eps_final": self.eps_final,
            "members": self.members,
            "quadrant_counts": self.quadrant_counts,
            "skew_index": self.skew_index,
        }

    def dump(self) -> bytes:
        return (json.dumps(self.to_doc(), indent=2) + "\n").encode("utf-8")

    @classmethod
    def load(cls, data: bytes) -> "LinkReport":
        try:
            doc = json.loads(data.decode("utf-8"))
            return cls(doc["n1"], doc["n2"], doc["line"], doc["eps_final"],
                       doc["members"], doc["quadrant_counts"],
                       doc["skew_index"])
        except (UnicodeDecodeError, json.JSONDecodeError, KeyError) as exc:
            raise MalformedDocument(f"not a link report: {exc}") from exc


def segment_foot(p1, p2, point):
    """(t, distance): foot parameter along [p1,p2] and distance to it."""
    dx, dy = p2[0] - p1[0], p2[1] - p1[1]
    length_sq = dx * dx + dy * dy
    t = ((point[0] - p1[0]) * dx + (point[1] - p1[1]) * dy) / length_sq
    foot = (p1[0] + t * dx, p1[1] + t * dy)
    dist = math.hypot(point[0] - foot[0], point[1] - foot[1])
    return t, dist


def quarter_of(t: float) -> int:
    """Quarter index 1..4 for a foot parameter; boundaries go downward."""
    if t <= 0.25:
        return 1
    if t <= 0.5:
        return 2
    if t <= 0.75:
        return 3
    return 4


def band_members(space: EmbeddingSpace, n1: str, n2: str, eps: float):
    """(member, t) pairs within eps of the segment between n1 and n2."""
    p1, p2 = space.vectors[n1], space.vectors[n2]
    out = []
    for node in sorted(space.vectors):
        if node in (n1, n2):
            continue
        t, dist = segment_foot(p1, p2, space.vectors[node])
        if 0.0 <= t <= 1.0 and dist <= eps:
            out.append((node, t))
    return out


def default_max_eps(space: EmbeddingSpace) -> float:
    points = list(space.vectors.values())
    best = 0.0
    for i, p in enumerate(points):
        for q in points[i + 1:]:
            best = max(best, math.dist(p, q))
    return best if best > 0.0 else 1.0


def predict_links(space: EmbeddingSpace, n1: str, n2: str, eps: float,
                  gamma: float, max_eps: float | None = None) -> LinkReport:
    if space.dim != 2:
        raise NotTwoDimensional(f"dim={space.dim}")
    for node in (n1, n2):
        if node not in space.vectors:
            raise MalformedDocument(f"node {node!r} is not in the embedding")
    if n1 == n2 or space.vectors[n1] == space.vectors[n2]:
        raise IdenticalEndpoints(f"{n1} and {n2}")
    if eps <= 0.0:
        raise ConfigInvalid("eps must be > 0")
    if not 0.0 < gamma <= 1.0:
        raise ConfigInvalid("gamma must be in (0,1]")
    if max_eps is None:
        max_eps = default_max_eps(space)

    p1, p2 = space.vectors[n1], space.vectors[n2]
    if p2[0] == p1[0]:
        line = {"vertical": p1[0]}
    else:
        a = (p2[1] - p1[1]) / (p2[0] - p1[0])
        line = {"a": a, "b": p1[1] - a * p1[0]}

    current = eps
    while True:
        members = band_members(space, n1, n2, current)
        counts = [0, 0, 0, 0]
        for _node, t in members:
            counts[quarter_of(t) - 1] += 1
        if all(counts) or current >= max_eps:
            break
        current += gamma

    total = sum(counts)
    skew = (sum((k + 1) * c for k, c in enumerate(counts)) / total
            if total else None)
    return LinkReport(n1, n2, line, current, [node for node, _ in members],
                      counts, skew)
