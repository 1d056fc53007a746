"""Leveled knowledge graph with enforced relation-symmetry semantics.

Nodes live on ordered abstraction levels (L0 < L1 < L2.s < L2.s+1 < L*).
Relation edges carry a symmetry class and an evidence-backed truth value;
abstraction edges connect a higher-level node to each of its lower-level
members. Structure checks are performed by `validate`, which reports
violations instead of silently repairing anything.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import (
    CrossLevelEdge,
    DuplicateName,
    EmptyMemberSet,
    IllegalKindForLevel,
    LevelOrderViolation,
    MalformedDocument,
    MergeViolation,
    SceneKGError,
    SymmetryClassConflict,
    UnknownNode,
)
from .truth import TruthValue, revise

LEVEL_TAGS = ("L0", "L1", "L2", "L*")
KINDS = ("Percept", "Concept", "Goal")

ANTI_SYMMETRIC = "anti-symmetric"
SYMMETRIC = "symmetric"

VIOLATION_CODES = (
    "AntiSymmetryBothDirections",
    "CrossLevelNonAbstractionEdge",
    "AbstractionCycle",
    "LevelOrderInverted",
)


@dataclass(frozen=True)
class Level:
    tag: str
    sublevel: int = 0

    def __post_init__(self):
        if self.tag not in LEVEL_TAGS:
            raise ValueError(f"unknown level tag: {self.tag}")
        if self.sublevel < 0:
            raise ValueError("sublevel must be non-negative")
        if self.tag != "L2" and self.sublevel != 0:
            raise ValueError("sublevels only apply to L2")

    @property
    def order_key(self):
        return (LEVEL_TAGS.index(self.tag), self.sublevel)

    def __lt__(self, other):
        return self.order_key < other.order_key

    def __le__(self, other):
        return self.order_key <= other.order_key

    def __gt__(self, other):
        return self.order_key > other.order_key

    def __ge__(self, other):
        return self.order_key >= other.order_key

    def __str__(self):
        if self.tag == "L2" and self.sublevel:
            return f"L2.{self.sublevel}"
        return self.tag


L0 = Level("L0")
L1 = Level("L1")
L2 = Level("L2")
LSTAR = Level("L*")


@dataclass
class Node:
    id: str
    name: str
    level: Level
    kind: str
    attrs: dict = field(default_factory=dict)


@dataclass
class Edge:
    src: str
    dst: str
    relation: str
    symmetry: str
    truth: TruthValue
    tags: set = field(default_factory=set)

    @property
    def key(self):
        return (self.src, self.relation, self.dst)


@dataclass(frozen=True)
class Violation:
    code: str
    subject: tuple
    message: str

    @property
    def sort_key(self):
        return (self.code, self.subject)


def _node_id(level: Level, kind: str, name: str) -> str:
    # Content-derived ids keep serialization canonical and make merge
    # commutative at the byte level.
    return f"{level}:{kind}:{name}"


def _check_kind(level: Level, kind: str):
    if kind not in KINDS:
        raise IllegalKindForLevel(f"unknown node kind: {kind}")
    if kind == "Percept" and level.tag not in ("L0", "L1"):
        raise IllegalKindForLevel(f"Percept nodes may not live at {level}")
    if kind == "Goal" and level.tag != "L*":
        raise IllegalKindForLevel(f"Goal nodes may only live at L*, not {level}")


class KnowledgeGraph:
    """Single-writer leveled graph; snapshots are shared read-only."""

    def __init__(self, strict: bool = False):
        # strict: reject cross-level relation edges at insert time instead
        # of flagging them at validation time.
        self.strict = strict
        self.nodes: dict[str, Node] = {}
        self.edges: dict[tuple, Edge] = {}
        self.abstractions: set[tuple] = set()
        self.relations: dict[str, str] = {}

    # --- nodes ---

    def add_node(self, level: Level, kind: str, name: str, attrs=None) -> str:
        if not name:
            raise DuplicateName("node name must be nonempty")
        _check_kind(level, kind)
        node_id = _node_id(level, kind, name)
        existing = self.nodes.get(node_id)
        if existing is not None:
            if attrs is not None and existing.attrs != dict(attrs):
                raise DuplicateName(
                    f"node {name!r} at {level}/{kind} exists with different attributes"
                )
            return node_id
        self.nodes[node_id] = Node(node_id, name, level, kind, dict(attrs or {}))
        return node_id

    def node(self, node_id: str) -> Node:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNode(node_id) from None

    # --- relation edges ---

    def register_relation(self, relation: str, symmetry: str):
        if symmetry not in (ANTI_SYMMETRIC, SYMMETRIC):
            raise SymmetryClassConflict(f"unknown symmetry class: {symmetry}")
        seen = self.relations.get(relation)
        if seen is not None and seen != symmetry:
            raise SymmetryClassConflict(
                f"relation {relation!r} already registered as {seen}"
            )
        self.relations[relation] = symmetry

    def assert_relation(self, src, relation, dst, symmetry, truth: TruthValue,
                        evidence_tag: str):
        if src not in self.nodes:
            raise UnknownNode(src)
        if dst not in self.nodes:
            raise UnknownNode(dst)
        if src == dst:
            raise SceneKGError(f"reflexive edge on {src} (no relation is reflexive)")
        self.register_relation(relation, symmetry)
        if symmetry == SYMMETRIC and dst < src:
            # canonical orientation: symmetric edges stored once, min id first
            src, dst = dst, src
        if self.strict and self.nodes[src].level != self.nodes[dst].level:
            raise CrossLevelEdge(
                f"{relation}({src},{dst}) spans levels in strict mode"
            )
        key = (src, relation, dst)
        edge = self.edges.get(key)
        if edge is None:
            self.edges[key] = Edge(src, dst, relation, symmetry, truth,
                                   {evidence_tag})
        elif evidence_tag not in edge.tags:
            edge.truth = revise(edge.truth, truth)
            edge.tags.add(evidence_tag)
        return key

    def has_relation(self, src, relation, dst) -> bool:
        if (src, relation, dst) in self.edges:
            return True
        if self.relations.get(relation) == SYMMETRIC:
            return (dst, relation, src) in self.edges
        return False

    def neighbors(self, node_id) -> set:
        """Nodes adjacent via any relation edge, ignoring direction."""
        out = set()
        for edge in self.edges.values():
            if edge.src == node_id:
                out.add(edge.dst)
            elif edge.dst == node_id:
                out.add(edge.src)
        return out

    # --- abstraction edges ---

    def add_abstraction_edge(self, higher, lower):
        """Unchecked insertion; level order is enforced by validate()."""
        if higher not in self.nodes:
            raise UnknownNode(higher)
        if lower not in self.nodes:
            raise UnknownNode(lower)
        self.abstractions.add((higher, lower))

    def abstract(self, name: str, level: Level, members) -> str:
        members = set(members)
        if not members:
            raise EmptyMemberSet(f"abstraction {name!r} needs at least one member")
        for m in members:
            node = self.node(m)
            if not level > node.level:
                raise LevelOrderViolation(
                    f"member {m} at {node.level} is not below {level}"
                )
        concept = self.add_node(level, "Concept", name)
        for m in sorted(members):
            self.abstractions.add((concept, m))
        return concept

    def extension(self, concept) -> set:
        self.node(concept)
        return {lo for hi, lo in self.abstractions if hi == concept}

    def intension(self, node_id) -> set:
        self.node(node_id)
        return {hi for hi, lo in self.abstractions if lo == node_id}

    # --- validation ---

    def validate(self) -> list:
        violations = []
        for key, edge in self.edges.items():
            if edge.symmetry == ANTI_SYMMETRIC:
                mirror = (edge.dst, edge.relation, edge.src)
                if mirror in self.edges and edge.src < edge.dst:
                    violations.append(Violation(
                        "AntiSymmetryBothDirections",
                        (edge.src, edge.relation, edge.dst),
                        f"{edge.relation} holds in both directions between "
                        f"{edge.src} and {edge.dst}",
                    ))
            src_level = self.nodes[edge.src].level
            dst_level = self.nodes[edge.dst].level
            if src_level != dst_level:
                violations.append(Violation(
                    "CrossLevelNonAbstractionEdge",
                    key,
                    f"{edge.relation}({edge.src},{edge.dst}) crosses "
                    f"{src_level} and {dst_level} without an abstraction edge",
                ))
        for higher, lower in self.abstractions:
            if not self.nodes[higher].level > self.nodes[lower].level:
                violations.append(Violation(
                    "LevelOrderInverted",
                    (higher, lower),
                    f"abstraction {higher} -> {lower} does not descend levels",
                ))
        violations.extend(self._abstraction_cycles())
        return sorted(violations, key=lambda v: v.sort_key)

    def _abstraction_cycles(self):
        down = {}
        for hi, lo in self.abstractions:
            down.setdefault(hi, []).append(lo)
        # iterative DFS with coloring; one violation per cycle found
        found = []
        color = {}  # 0 in progress, 1 done
        for root in sorted(down):
            if root in color:
                continue
            stack = [(root, iter(sorted(down.get(root, ()))))]
            color[root] = 0
            path = [root]
            while stack:
                node, it = stack[-1]
                advanced = False
                for nxt in it:
                    if color.get(nxt) == 0:
                        cycle = tuple(path[path.index(nxt):] + [nxt])
                        found.append(Violation(
                            "AbstractionCycle",
                            tuple(sorted(set(cycle))),
                            "abstraction edges form a cycle through "
                            + " -> ".join(cycle),
                        ))
                    elif nxt not in color:
                        color[nxt] = 0
                        stack.append((nxt, iter(sorted(down.get(nxt, ())))))
                        path.append(nxt)
                        advanced = True
                        break
                if not advanced:
                    color[node] = 1
                    stack.pop()
                    path.pop()
        # dedupe cycles found from different roots
        seen = set()
        unique = []
        for v in found:
            if v.subject not in seen:
                seen.add(v.subject)
                unique.append(v)
        return unique

    # --- serialization ---

    def to_doc(self) -> dict:
        nodes = [
            {
                "id": n.id,
                "name": n.name,
                "level": n.level.tag,
                "sublevel": n.level.sublevel,
                "kind": n.kind,
            }
            for n in sorted(self.nodes.values(), key=lambda n: n.id)
        ]
        edges = [
            {
                "src": e.src,
                "dst": e.dst,
                "relation": e.relation,
                "symmetry": e.symmetry,
                "f": e.truth.f,
                "w": e.truth.w,
                "tags": sorted(e.tags),
            }
            for e in sorted(self.edges.values(), key=lambda e: e.key)
        ]
        abstractions = [
            {"higher": hi, "lower": lo}
            for hi, lo in sorted(self.abstractions)
        ]
        return {
            "version": 1,
            "nodes": nodes,
            "edges": edges,
            "abstractions": abstractions,
        }

    def serialize(self) -> bytes:
        return (json.dumps(self.to_doc(), indent=2) + "\n").encode("utf-8")

    @classmethod
    def from_doc(cls, doc, strict: bool = False) -> "KnowledgeGraph":
        if not isinstance(doc, dict):
            raise MalformedDocument("graph document must be an object")
        if doc.get("version") != 1:
            raise MalformedDocument(f"unsupported version: {doc.get('version')!r}")
        for field_name in ("nodes", "edges", "abstractions"):
            if not isinstance(doc.get(field_name), list):
                raise MalformedDocument(f"missing or malformed field {field_name!r}")
        g = cls(strict=False)
        try:
            for entry in doc["nodes"]:
                level = Level(entry["level"], entry["sublevel"])
                g.add_node(level, entry["kind"], entry["name"])
            for entry in doc["edges"]:
                truth = TruthValue(float(entry["f"]), float(entry["w"]))
                key = g.assert_relation(
                    entry["src"], entry["relation"], entry["dst"],
                    entry["symmetry"], truth, entry["tags"][0] if entry["tags"]
                    else "doc",
                )
                g.edges[key].tags = set(entry["tags"])
            for entry in doc["abstractions"]:
                g.add_abstraction_edge(entry["higher"], entry["lower"])
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise MalformedDocument(f"bad graph document field: {exc}") from exc
        except SceneKGError as exc:
            raise MalformedDocument(str(exc)) from exc
        g.strict = strict
        return g

    @classmethod
    def deserialize(cls, data: bytes, strict: bool = False) -> "KnowledgeGraph":
        try:
            doc = json.loads(data.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise MalformedDocument(f"not a graph document: {exc}") from exc
        return cls.from_doc(doc, strict=strict)

    def copy(self) -> "KnowledgeGraph":
        g = KnowledgeGraph.from_doc(self.to_doc(), strict=self.strict)
        for node_id, node in self.nodes.items():
            g.nodes[node_id].attrs = dict(node.attrs)
        return g


def merge(g1: KnowledgeGraph, g2: KnowledgeGraph) -> KnowledgeGraph:
    """Union two clean graphs, pooling evidence of duplicate statements."""
    for g in (g1, g2):
        violations = g.validate()
        if violations:
            raise MergeViolation(violations)
    out = KnowledgeGraph(strict=False)
    for g in (g1, g2):
        for node in g.nodes.values():
            existing = out.nodes.get(node.id)
            if existing is None:
                out.add_node(node.level, node.kind, node.name, node.attrs)
            # attribute conflicts resolve to the first graph's attrs
    for relation in sorted(set(g1.relations) | set(g2.relations)):
        cls1, cls2 = g1.relations.get(relation), g2.relations.get(relation)
        if cls1 and cls2 and cls1 != cls2:
            raise SymmetryClassConflict(
                f"relation {relation!r} is {cls1} in one graph, {cls2} in the other"
            )
        out.register_relation(relation, cls1 or cls2)
    for key in sorted(set(g1.edges) | set(g2.edges)):
        e1, e2 = g1.edges.get(key), g2.edges.get(key)
        if e1 is None or e2 is None:
            e = e1 or e2
            out.edges[key] = Edge(e.src, e.dst, e.relation, e.symmetry,
                                  e.truth, set(e.tags))
        elif e1.tags.isdisjoint(e2.tags):
            out.edges[key] = Edge(e1.src, e1.dst, e1.relation, e1.symmetry,
                                  revise(e1.truth, e2.truth),
                                  e1.tags | e2.tags)
        else:
            # Overlapping evidence cannot be pooled without double counting;
            # keep the better-evidenced side and union the tags.
            keep = e1 if (len(e1.tags), e1.truth.w) >= (len(e2.tags), e2.truth.w) else e2
            out.edges[key] = Edge(keep.src, keep.dst, keep.relation,
                                  keep.symmetry, keep.truth, e1.tags | e2.tags)
    for g in (g1, g2):
        for hi, lo in g.abstractions:
            out.abstractions.add((hi, lo))
    violations = out.validate()
    if violations:
        raise MergeViolation(violations)
    return out
