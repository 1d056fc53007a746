"""Focus-of-attention covers: bounded overlapping reasoning contexts.

A cover is a seed rect plus graph neighbors gathered best-first up to
the cap K, preferring containment-family edges, then row edges, then
any other relation edge, and within a class decreasing area (ties by
id). The class of a candidate is the worst edge class along its path
from the seed, so reaching a rect through a loose column/global edge
never unlocks that rect's own tight family. Covers overlap; seeds are
consumed; the loop runs until every rect belongs to at least one cover.
Each cover is reasoned independently on its induced subgraph, and the
per-cover labelings are merged with the choice rule.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .errors import ConfigInvalid, NonConvergence, UniverseMismatch
from .kg import KnowledgeGraph
from .reasoner import Labeling, infer_labels
from .scene import Scene
from .spatial import ATTR_NAMES, VOID_NAME, Tolerances, extract_relations
from .truth import VACUOUS, claim_sort_key

LARGEST_CONTAINER = "LargestContainer"
LARGEST_ANY = "LargestAny"


@dataclass(frozen=True)
class Cover:
    seed: str
    members: tuple  # rect ids, seed first, insertion order
    ordinal: int


@dataclass(frozen=True)
class FoAConfig:
    k: int = 12
    seed_policy: str = LARGEST_CONTAINER

    def check(self):
        if self.k < 2:
            raise ConfigInvalid("cover cap K must be >= 2")
        if self.seed_policy not in (LARGEST_CONTAINER, LARGEST_ANY):
            raise ConfigInvalid(f"unknown seed policy: {self.seed_policy}")


@dataclass
class RunStats:
    mode: str
    n_covers: int
    k: int
    per_cover: list = field(default_factory=list)
    wall_ms: float = 0.0

    def to_doc(self):
        return {
            "mode": self.mode,
            "n_covers": self.n_covers,
            "K": self.k,
            "per_cover": self.per_cover,
            "wall_ms": self.wall_ms,
        }

    def dump(self) -> bytes:
        return (json.dumps(self.to_doc(), indent=2) + "\n").encode("utf-8")


# Cover traversal edge classes. Containment-family edges (a shelf and
# the things resting inside/on it) come first, then row edges (bottom
# alignment), then column/global edges. Full-width shelves neighbor
# every product via above/below, so a purely area-ordered visit would
# fill every cover with the same scene-wide maxima instead of a local
# context; the class ordering keeps a cover the "candidate shelf plus
# its row" neighborhood while still reaching the whole connected
# component when K is large.
FAMILY_RELATIONS = frozenset({"contains", "inside", "on_top_of", "under"})
ROW_RELATIONS = frozenset({"aligned_h"})
_OTHER_CLASS = 2


def _edge_class(relation: str) -> int:
    if relation in FAMILY_RELATIONS:
        return 0
    if relation in ROW_RELATIONS:
        return 1
    return _OTHER_CLASS


def _adjacency(graph: KnowledgeGraph):
    """name -> {neighbor name: best edge class}, void excluded."""
    adj = {}
    for edge in graph.edges.values():
        src = graph.nodes[edge.src].name
        dst = graph.nodes[edge.dst].name
        if VOID_NAME in (src, dst):
            continue
        cls = _edge_class(edge.relation)
        for a, b in ((src, dst), (dst, src)):
            cur = adj.setdefault(a, {})
            cur[b] = min(cur.get(b, _OTHER_CLASS), cls)
    return adj


def build_covers(graph: KnowledgeGraph, scene: Scene, cfg: FoAConfig) -> list:
    cfg.check()
    area = {r.id: r.area for r in scene.rects}
    adj = _adjacency(graph)
    containers = {
        graph.nodes[e.src].name
        for e in graph.edges.values() if e.relation == "contains"
    }
    by_size = lambda rid: (-area[rid], rid)

    covers = []
    covered = set()
    seeded = set()
    all_ids = set(area)
    while covered != all_ids:
        candidates = sorted(all_ids - seeded, key=by_size)
        if cfg.seed_policy == LARGEST_CONTAINER:
            preferred = [r for r in candidates if r in containers]
            seed = preferred[0] if preferred else candidates[0]
        else:
            seed = candidates[0]
        members = [seed]
        entry = {seed: 0}  # member -> worst edge class on its path
        frontier = {}

        def offer(member):
            for nb, edge_cls in adj.get(member, {}).items():
                if nb in entry:
                    continue
                cand = max(entry[member], edge_cls)
                if cand < frontier.get(nb, _OTHER_CLASS + 1):
                    frontier[nb] = cand

        offer(seed)
        while frontier and len(members) < cfg.k:
            nxt = min(frontier, key=lambda r: (frontier[r], -area[r], r))
            entry[nxt] = frontier.pop(nxt)
            members.append(nxt)
            offer(nxt)
        covers.append(Cover(seed, tuple(members), len(covers)))
        seeded.add(seed)
        covered.update(members)
    return covers


def induced_subgraph(graph: KnowledgeGraph, members, evidence_tag: str):
    """Restrict the relation graph to member rects, re-tagging evidence."""
    member_names = set(members) | {VOID_NAME}
    sub = KnowledgeGraph(strict=graph.strict)
    for relation, symmetry in graph.relations.items():
        sub.register_relation(relation, symmetry)
    keep_ids = {}
    for node_id, node in graph.nodes.items():
        if node.name in member_names:
            keep_ids[node_id] = sub.add_node(node.level, node.kind, node.name,
                                             node.attrs)
    for key in sorted(graph.edges):
        edge = graph.edges[key]
        if edge.src in keep_ids and edge.dst in keep_ids:
            sub.assert_relation(edge.src, edge.relation, edge.dst,
                                edge.symmetry, edge.truth, evidence_tag)
    return sub


def merge_labelings(labelings) -> Labeling:
    labelings = list(labelings)
    if not labelings:
        raise UniverseMismatch("nothing to merge")
    universe = labelings[0].ids()
    for lab in labelings[1:]:
        if lab.ids() != universe:
            raise UniverseMismatch(
                f"labelings cover different id sets: "
                f"{sorted(universe ^ lab.ids())[:5]}...")
    merged = {}
    for rect_id in sorted(universe):
        claims = [lab.labels[rect_id] for lab in labelings]
        merged[rect_id] = max(claims,
                              key=lambda cl: claim_sort_key(cl[0], cl[1]))
    return Labeling(merged)


def _premise_count(graph: KnowledgeGraph) -> int:
    n_rects = sum(
        1 for n in graph.nodes.values()
        if n.kind == "Percept" and n.name != VOID_NAME
    )
    return len(graph.edges) + len(ATTR_NAMES) * n_rects


def run(scene: Scene, tol: Tolerances, rules, cfg: FoAConfig, use_foa: bool):
    """Full pipeline on one scene; returns (Labeling, RunStats)."""
    t0 = time.perf_counter()
    graph = extract_relations(scene, tol)
    universe = sorted(r.id for r in scene.rects)
    if not use_foa:
        labeling = infer_labels(graph, rules)
        stats = RunStats("global", 1, cfg.k, [{
            "ordinal": 0,
            "size": len(universe),
            "premises": _premise_count(graph),
            "passes": labeling.passes,
        }])
        stats.wall_ms = (time.perf_counter() - t0) * 1000.0
        return labeling, stats

    covers = build_covers(graph, scene, cfg)
    stats = RunStats("foa", len(covers), cfg.k)
    labelings = []
    for cover in covers:
        sub = induced_subgraph(graph, cover.members, f"cover:{cover.ordinal}")
        try:
            partial = infer_labels(sub, rules)
        except NonConvergence as exc:
            raise NonConvergence(exc.passes, exc.delta,
                                 cover=cover.ordinal) from exc
        full = {rect_id: ("Other", VACUOUS) for rect_id in universe}
        full.update(partial.labels)
        labelings.append(Labeling(full))
        stats.per_cover.append({
            "ordinal": cover.ordinal,
            "size": len(cover.members),
            "premises": _premise_count(sub),
            "passes": partial.passes,
        })
    merged = merge_labelings(labelings)
    stats.wall_ms = (time.perf_counter() - t0) * 1000.0
    return merged, stats
