"""Forward-chaining rule engine with evidential-base tracking.

Statements are (subject, label) pairs with a pooled truth value and an
evidential base. The base of a derivation is the set of premise
occurrences it rests on: edge tokens and the identities (plus bases) of
premise statements. Derivations whose base would contain the conclusion
itself are blocked, and only derivations with pairwise disjoint bases
are pooled, so alignment cycles cannot inflate confidence.

Each rule instantiation fires exactly once per unique premise tuple and
keeps the truth computed at that moment; passes instantiate against the
previous pass's statement snapshot, which makes the fixpoint independent
of edge insertion order and guarantees structural termination.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import MalformedDocument, NonConvergence
from .kg import SYMMETRIC, KnowledgeGraph
from .spatial import VOID_NAME
from .truth import VACUOUS, TruthValue, claim_sort_key, conjoin, deduce, revise

MAX_PASSES = 100
CONVERGENCE_EPS = 1e-9


@dataclass(frozen=True)
class Statement:
    subject: str
    label: str
    truth: TruthValue
    base: frozenset

    @property
    def token(self):
        return f"stmt:{self.subject}:{self.label}"


@dataclass
class Labeling:
    labels: dict  # rect id -> (label, TruthValue)
    passes: int = 0  # fixpoint passes taken to derive it (not serialized)

    def label_of(self, rect_id) -> str:
        return self.labels[rect_id][0]

    def ids(self):
        return set(self.labels)


def _edge_index(graph: KnowledgeGraph):
    """Relation -> list of (src_name, dst_name, truth, base) matches."""
    names = {nid: node.name for nid, node in graph.nodes.items()}
    index = {}
    floating = {}
    for key in sorted(graph.edges):
        edge = graph.edges[key]
        src, dst = names[edge.src], names[edge.dst]
        # The base element is the edge occurrence itself, not its evidence
        # tags: scene-wide tags are shared by every edge and would make all
        # bases overlap, so no two derivations could ever be pooled.
        base = frozenset({f"edge:{src}:{edge.relation}:{dst}"})
        if edge.relation == "floating" and dst == VOID_NAME:
            floating[src] = (edge.truth, base)
            continue
        entries = index.setdefault(edge.relation, [])
        entries.append((src, dst, edge.truth, base))
        if edge.symmetry == SYMMETRIC:
            entries.append((dst, src, edge.truth, base))
    return index, floating


def _match_rule(rule, edge_index, floating, statements):
    """Yield (bindings, truths, base, instance_key) for each instantiation."""
    partial = [({}, (), frozenset(), ())]
    for atom in rule.premises:
        extended = []
        if atom.is_label:
            label = {"shelf": "Shelf", "product": "Product",
                     "other": "Other"}[atom.name]
            var = atom.args[0]
            for binding, truths, base, key in partial:
                if var in binding:
                    stmt = statements.get((binding[var], label))
                    if stmt is not None and not atom.negated:
                        extended.append((
                            binding, truths + (stmt.truth,),
                            base | stmt.base | {stmt.token},
                            key + (stmt.token,)))
                    elif stmt is None and atom.negated:
                        extended.append((binding, truths, base, key))
                else:
                    if atom.negated:
                        raise ValueError(f"unbound negated atom {atom}")
                    for (subj, lab), stmt in sorted(statements.items()):
                        if lab != label:
                            continue
                        extended.append((
                            {**binding, var: subj},
                            truths + (stmt.truth,),
                            base | stmt.base | {stmt.token},
                            key + (stmt.token,)))
        elif atom.name == "floating":
            var = atom.args[0]
            for binding, truths, base, key in partial:
                if var in binding:
                    entry = floating.get(binding[var])
                    if atom.negated:
                        if entry is None:
                            extended.append((binding, truths, base, key))
                    elif entry is not None:
                        truth, ebase = entry
                        extended.append((
                            binding, truths + (truth,), base | ebase,
                            key + (f"float:{binding[var]}",)))
                else:
                    if atom.negated:
                        raise ValueError(f"unbound negated atom {atom}")
                    for subj in sorted(floating):
                        truth, ebase = floating[subj]
                        extended.append((
                            {**binding, var: subj},
                            truths + (truth,), base | ebase,
                            key + (f"float:{subj}",)))
        else:
            if atom.negated:
                raise ValueError(f"negated relation atoms are unsupported: {atom}")
            var_a, var_b = atom.args
            for binding, truths, base, key in partial:
                for src, dst, truth, ebase in edge_index.get(atom.name, ()):
                    if binding.get(var_a, src) != src:
                        continue
                    if binding.get(var_b, dst) != dst:
                        continue
                    if src == dst:
                        continue
                    new_binding = {**binding, var_a: src, var_b: dst}
                    extended.append((
                        new_binding, truths + (truth,), base | ebase,
                        key + (f"edge:{src}:{atom.name}:{dst}",)))
        partial = extended
    return partial


def _pool(derivations):
    """Greedy disjoint-base pooling in recording order."""
    pooled = VACUOUS
    used = frozenset()
    for _order, base, truth in sorted(derivations):
        if used & base:
            continue
        pooled = revise(pooled, truth)
        used |= base
    return pooled, used


def infer_labels(graph: KnowledgeGraph, rules) -> Labeling:
    """Run the rules to fixpoint and label every rect via the choice rule."""
    edge_index, floating = _edge_index(graph)
    universe = sorted(
        node.name for node in graph.nodes.values()
        if node.kind == "Percept" and node.name != VOID_NAME
    )
    statements: dict = {}
    derivations: dict = {}  # (subject, label) -> [(order, base, truth)]
    fired = set()  # instances that already fired, once each
    passes = 0
    for pass_no in range(MAX_PASSES):
        passes = pass_no + 1
        # Instantiate against the snapshot from the end of the previous
        # pass so the result is independent of rule and edge order.
        new = []
        for rule in rules:
            for binding, truths, base, key in _match_rule(
                    rule, edge_index, floating, statements):
                instance = (rule.id, key)
                if instance in fired:
                    continue
                new.append((instance, binding, truths, base, rule))
        grew = False
        for instance, binding, truths, base, rule in sorted(
                new, key=lambda item: item[0]):
            fired.add(instance)
            # A derivation keeps the truth computed when it first fires.
            truth = deduce(conjoin(truths), rule.prior)
            for label, var in rule.conclusions:
                subject = binding[var]
                if f"stmt:{subject}:{label}" in base:
                    continue  # conclusion may not rest on itself
                order = (passes, instance)
                derivations.setdefault((subject, label), []).append(
                    (order, base, truth))
                grew = True
        new_statements = {}
        for stmt_key in sorted(derivations):
            subject, label = stmt_key
            truth, base = _pool(derivations[stmt_key])
            new_statements[stmt_key] = Statement(subject, label, truth, base)
        delta = _snapshot_delta(statements, new_statements)
        statements = new_statements
        if not grew and delta <= CONVERGENCE_EPS:
            break
    else:
        raise NonConvergence(MAX_PASSES, delta)

    labels = {}
    for rect_id in universe:
        claims = [
            (stmt.label, stmt.truth)
            for (subj, _), stmt in sorted(statements.items())
            if subj == rect_id
        ]
        if not claims:
            labels[rect_id] = ("Other", VACUOUS)
        else:
            labels[rect_id] = max(
                claims, key=lambda cl: claim_sort_key(cl[0], cl[1]))
    return Labeling(labels, passes=passes)


def _snapshot_delta(old, new):
    delta = 0.0
    for key in set(old) | set(new):
        t_old = old[key].truth if key in old else None
        t_new = new[key].truth if key in new else None
        if t_old is None or t_new is None:
            delta = max(delta, 1.0)
        else:
            delta = max(delta, abs(t_old.f - t_new.f), abs(t_old.c - t_new.c))
    return delta


# --- labeling document ---

def dump_labeling(labeling: Labeling) -> bytes:
    doc = {
        "labels": {
            rect_id: {"label": label, "f": truth.f, "w": truth.w}
            for rect_id, (label, truth) in labeling.labels.items()
        }
    }
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def load_labeling(data: bytes) -> Labeling:
    try:
        doc = json.loads(data.decode("utf-8"))
        labels = {
            rect_id: (entry["label"], TruthValue(float(entry["f"]),
                                                 float(entry["w"])))
            for rect_id, entry in doc["labels"].items()
        }
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError,
            ValueError) as exc:
        raise MalformedDocument(f"not a labeling document: {exc}") from exc
    return Labeling(labels)
