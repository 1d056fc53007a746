"""Tolerance-parameterized spatial predicates over rectangle scenes.

Every ordered pair is evaluated independently for every predicate:
inverse pairs (inside/contains, above/below, ...) are each computed from
the geometry, never inferred from one another. The implementation is
vectorized over all pairs with numpy; the test suite holds a naive
straight-line transcription of the same definitions and requires exact
agreement.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ConfigInvalid, PremiseSyntaxError
from .kg import ANTI_SYMMETRIC, L1, SYMMETRIC, KnowledgeGraph
from .scene import Scene, derived
from .truth import TruthValue

VOID_NAME = "void"

RELATION_SYMMETRY = {
    "inside": ANTI_SYMMETRIC,
    "contains": ANTI_SYMMETRIC,
    "aligned_h": SYMMETRIC,
    "aligned_v": SYMMETRIC,
    "above": ANTI_SYMMETRIC,
    "below": ANTI_SYMMETRIC,
    "on_left_of": ANTI_SYMMETRIC,
    "on_right_of": ANTI_SYMMETRIC,
    "on_top_of": ANTI_SYMMETRIC,
    "under": ANTI_SYMMETRIC,
    "floating": ANTI_SYMMETRIC,
}

ATTR_NAMES = ("x", "y", "cx", "cy", "w", "h", "area")


@dataclass(frozen=True)
class Tolerances:
    eps_contain: float = 0.01
    tau_align: float = 0.10
    tau_gap: float = 0.01
    min_overlap: float = 0.30
    support_overlap: float = 0.50

    def check(self):
        for name in ("eps_contain", "tau_align", "tau_gap", "min_overlap",
                     "support_overlap"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigInvalid(f"tolerance {name} out of [0,1]: {v}")

    @classmethod
    def from_doc(cls, doc) -> "Tolerances":
        try:
            tol = cls(**dict(doc))
        except TypeError as exc:
            raise ConfigInvalid(f"bad tolerances: {exc}") from exc
        tol.check()
        return tol

    def to_doc(self) -> dict:
        return {
            "eps_contain": self.eps_contain,
            "tau_align": self.tau_align,
            "tau_gap": self.tau_gap,
            "min_overlap": self.min_overlap,
            "support_overlap": self.support_overlap,
        }


def relation_matrices(scene: Scene, tol: Tolerances) -> dict:
    """Boolean pair matrices M[rel][i,j] == rel(rect_i, rect_j).

    `floating` comes back as a length-n vector.
    """
    rects = sorted(scene.rects, key=lambda r: r.id)
    n = len(rects)
    x = np.array([r.x for r in rects])
    y = np.array([r.y for r in rects])
    w = np.array([r.w for r in rects])
    h = np.array([r.h for r in rects])
    right = x + w
    bottom = y + h
    area = w * h

    xi, xj = x[:, None], x[None, :]
    yi, yj = y[:, None], y[None, :]
    ri, rj = right[:, None], right[None, :]
    bi, bj = bottom[:, None], bottom[None, :]
    wi, wj = w[:, None], w[None, :]
    hi, hj = h[:, None], h[None, :]
    ai, aj = area[:, None], area[None, :]
    off_diag = ~np.eye(n, dtype=bool)

    # containment slack scales with the *container's* smaller extent
    eps_i = tol.eps_contain * np.minimum(w, h)[:, None]
    contains = ((xi - eps_i <= xj) & (xj + wj <= ri + eps_i)
                & (yi - eps_i <= yj) & (yj + hj <= bi + eps_i)
                & (ai > aj) & off_diag)

    # inside(A,B): A fits in B, with B's slack; evaluated independently
    eps_j = tol.eps_contain * np.minimum(w, h)[None, :]
    inside = ((xj - eps_j <= xi) & (xi + wi <= rj + eps_j)
              & (yj - eps_j <= yi) & (yi + hi <= bj + eps_j)
              & (aj > ai) & off_diag)

    v_overlap = np.minimum(bi, bj) - np.maximum(yi, yj)
    h_overlap = np.minimum(ri, rj) - np.maximum(xi, xj)

    aligned_h = ((np.abs(bi - bj) <= tol.tau_align * np.maximum(hi, hj))
                 & (v_overlap >= 0.5 * np.minimum(hi, hj))
                 & ~contains & ~inside & off_diag)

    aligned_v = ((np.abs(xi - xj) <= tol.tau_align * np.maximum(wi, wj))
                 & (np.abs(ri - rj) <= tol.tau_align * np.maximum(wi, wj))
                 & ~contains & ~inside & off_diag)

    above = ((bi <= yj) & (h_overlap >= tol.min_overlap * np.minimum(wi, wj))
             & off_diag)
    below = ((bj <= yi) & (h_overlap >= tol.min_overlap * np.minimum(wi, wj))
             & off_diag)

    gap = tol.tau_gap * scene.height
    on_top_of = (above & (yj - bi <= gap)
                 & (h_overlap >= tol.support_overlap * np.minimum(wi, wj)))
    under = (below & (yi - bj <= gap)
             & (h_overlap >= tol.support_overlap * np.minimum(wi, wj)))

    on_left_of = ((ri <= xj) & (v_overlap >= 0.5 * np.minimum(hi, hj))
                  & off_diag)
    on_right_of = ((rj <= xi) & (v_overlap >= 0.5 * np.minimum(hi, hj))
                   & off_diag)

    # floating(B): supported by nothing, and every container's bottom is
    # far above B's bottom (so B does not rest on its container)
    supported = on_top_of.any(axis=1)
    resting_in = (contains & (bi - bj <= gap)).any(axis=0)
    floating = ~supported & ~resting_in

    return {
        "ids": [r.id for r in rects],
        "contains": contains,
        "inside": inside,
        "aligned_h": aligned_h,
        "aligned_v": aligned_v,
        "above": above,
        "below": below,
        "on_left_of": on_left_of,
        "on_right_of": on_right_of,
        "on_top_of": on_top_of,
        "under": under,
        "floating": floating,
    }


def lateral_relations(a, b, tol: Tolerances) -> dict:
    """on_left_of / on_right_of for one ordered rect pair."""
    scene = Scene("pair", max(a.right, b.right) + 1.0,
                  max(a.bottom, b.bottom) + 1.0, [a, b])
    m = relation_matrices(scene, tol)
    i, j = m["ids"].index(a.id), m["ids"].index(b.id)
    return {
        "on_left_of": bool(m["on_left_of"][i, j]),
        "on_right_of": bool(m["on_right_of"][i, j]),
    }


def extract_relations(scene: Scene, tol: Tolerances) -> KnowledgeGraph:
    """Build the L1 relation graph of a scene."""
    graph = KnowledgeGraph(strict=True)
    for relation, symmetry in RELATION_SYMMETRY.items():
        graph.register_relation(relation, symmetry)
    void = graph.add_node(L1, "Percept", VOID_NAME)
    rects = sorted(scene.rects, key=lambda r: r.id)
    node_of = {}
    for r in rects:
        attrs = derived(r)
        node_of[r.id] = graph.add_node(L1, "Percept", r.id, attrs={
            "x": r.x, "y": r.y,
            "cx": attrs.center[0], "cy": attrs.center[1],
            "w": r.w, "h": r.h,
            "area": attrs.area,
            "circumference": attrs.circumference,
        })
    if not rects:
        return graph
    m = relation_matrices(scene, tol)
    ids = m["ids"]
    tag = f"geom:{scene.scene_id}"
    crisp = TruthValue(1.0, 1.0)
    binary = ("contains", "inside", "aligned_h", "aligned_v", "above",
              "below", "on_left_of", "on_right_of", "on_top_of", "under")
    for relation in binary:
        mat = m[relation]
        for i, j in zip(*np.nonzero(mat)):
            graph.assert_relation(node_of[ids[i]], relation, node_of[ids[j]],
                                  RELATION_SYMMETRY[relation], crisp, tag)
    for i in np.nonzero(m["floating"])[0]:
        graph.assert_relation(node_of[ids[i]], "floating", void,
                              ANTI_SYMMETRIC, crisp, tag)
    return graph


# --- premise text ---

@dataclass(frozen=True)
class Premise:
    subject: str
    relation: str        # relation name, "floating", or an attribute name
    obj: str | None      # None for unary/attribute premises
    value: float | None  # None for relation/unary premises
    f: float
    w: int


def _fmt_truth(truth: TruthValue) -> str:
    w = truth.w
    if abs(w - round(w)) > 1e-9:
        raise ValueError(f"premise evidence weight must be integral, got {w}")
    return f"{{{truth.f:.6f} {int(round(w))}}}"


def to_premises(graph: KnowledgeGraph) -> str:
    """One line per relation edge plus one line per node attribute."""
    lines = []
    for edge in graph.edges.values():
        src = graph.nodes[edge.src].name
        dst = graph.nodes[edge.dst].name
        truth = _fmt_truth(edge.truth)
        if edge.relation == "floating" and dst == VOID_NAME:
            lines.append(f"<{src} --> [floating]>. {truth}")
        else:
            lines.append(f"<({src},{dst}) --> {edge.relation}>. {truth}")
    for node in graph.nodes.values():
        if node.name == VOID_NAME or not node.attrs:
            continue
        for attr in ATTR_NAMES:
            lines.append(
                f"<{node.name} --> [{attr}={node.attrs[attr]:.6f}]>."
                " {1.000000 1}"
            )
    return "".join(line + "\n" for line in sorted(lines))


_FLOAT = r"-?\d+\.\d{6}"
_ID = r"[^\s,()<>]+"
_RELATION_RE = re.compile(
    rf"^<\(({_ID}),({_ID})\) --> ([a-z_]+)>\. \{{({_FLOAT}) (\d+)\}}$")
_UNARY_RE = re.compile(
    rf"^<({_ID}) --> \[floating\]>\. \{{({_FLOAT}) (\d+)\}}$")
_ATTR_RE = re.compile(
    rf"^<({_ID}) --> \[([a-z]+)=({_FLOAT})\]>\. \{{1\.000000 1\}}$")


def parse_premises(text: str) -> list:
    premises = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        match = _RELATION_RE.match(line)
        if match:
            src, dst, relation, f, w = match.groups()
            premises.append(Premise(src, relation, dst, None,
                                    float(f), int(w)))
            continue
        match = _UNARY_RE.match(line)
        if match:
            subject, f, w = match.groups()
            premises.append(Premise(subject, "floating", None, None,
                                    float(f), int(w)))
            continue
        match = _ATTR_RE.match(line)
        if match:
            subject, attr, value = match.groups()
            if attr not in ATTR_NAMES:
                raise PremiseSyntaxError(line_no, f"unknown attribute {attr!r}")
            premises.append(Premise(subject, attr, None, float(value), 1.0, 1))
            continue
        raise PremiseSyntaxError(line_no, f"unparseable premise: {line!r}")
    return premises


def graph_premises(graph: KnowledgeGraph) -> list:
    """The premise multiset of a graph (same records parse_premises yields)."""
    return parse_premises(to_premises(graph))
