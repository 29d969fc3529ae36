"""Discourse accessibility graph and the Sel/Del evaluation pass.

The graph holds one node per discourse event. Subordinating attachment adds
a vertical parent edge; coordinating attachment adds a horizontal sibling
edge and an abstract node covering the coordinated group (the cover inherits
the target's parent, so material above the group stays reachable). A second
coordination onto a covered node extends the existing cover instead of
nesting a new one; the extra binder label introduced by that composition is
recorded as an alias of the cover node.

The right frontier is the walk from the most recently attached node upward,
stepping to a node's cover when it has one and to its parent otherwise.
Only frontier nodes accept new attachments.

Graphs are persistent values: ``attach`` returns a new graph sharing
structure with the old one, so any snapshot can be read concurrently.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from .core import And, App, Cons, Const, EVENT, Exists, Lam, Term, Var
from .errors import (
    DuplicateId, EmptyGraph, InaccessibleTarget, NoAntecedent,
    ResolutionError, UnknownLabel,
)

SUBORDINATING = "subordinating"
COORDINATING = "coordinating"


@dataclass(frozen=True)
class EventNode:
    id: str
    kind: str = "concrete"  # or "abstract"
    sentence_index: int | None = None

    def __post_init__(self):
        if self.kind not in ("concrete", "abstract"):
            raise ValueError(f"unknown node kind: {self.kind}")


# Selection strategies for Sel evaluation.


@dataclass(frozen=True)
class MostRecent:
    pass


@dataclass(frozen=True)
class FixedTarget:
    node_id: str


@dataclass(frozen=True)
class Callback:
    fn: Callable


SelStrategy = MostRecent | FixedTarget | Callback


@dataclass(frozen=True, eq=False)
class DiscourseGraph:
    nodes: dict = field(default_factory=dict)        # id -> EventNode, insertion order
    parent: dict = field(default_factory=dict)       # child id -> parent id
    coor_edges: tuple = ()                           # (left id, right id) pairs
    cover: dict = field(default_factory=dict)        # member id -> abstract id
    members: dict = field(default_factory=dict)      # abstract id -> member ids
    aliases: dict = field(default_factory=dict)      # extra label -> node id
    edge_labels: dict = field(default_factory=dict)  # (a, b) -> relation name
    last_attached: str | None = None


def empty_graph() -> DiscourseGraph:
    return DiscourseGraph()


def _resolve_id(graph: DiscourseGraph, label: str) -> str:
    if label in graph.nodes:
        return label
    if label in graph.aliases:
        return graph.aliases[label]
    raise UnknownLabel(label)


def attach(graph: DiscourseGraph, new: EventNode, rel: str | None = None,
           target: str | None = None, abstract_id: str | None = None,
           label: str | None = None) -> DiscourseGraph:
    """Attach ``new`` to the graph. The first node is inserted as the root
    with no relation; afterwards ``rel`` must name a relation class and
    ``target`` a right-frontier node (default: the last attached one).
    ``abstract_id`` names the cover node a coordinating attachment creates;
    ``label`` is a display name for the relation (DOT output only)."""
    if new.id in graph.nodes or new.id in graph.aliases:
        raise DuplicateId(new.id)
    if not graph.nodes:
        if rel is not None:
            raise ValueError("the first node is a root insertion without a relation")
        return DiscourseGraph(nodes={new.id: new}, last_attached=new.id)
    if rel not in (SUBORDINATING, COORDINATING):
        raise ValueError(f"unknown relation class: {rel}")
    target = graph.last_attached if target is None else _resolve_id(graph, target)
    frontier_ids = {n.id for n in right_frontier(graph)}
    if target not in frontier_ids:
        raise InaccessibleTarget(target)

    nodes = {**graph.nodes, new.id: new}
    parent = dict(graph.parent)
    coor_edges = graph.coor_edges
    cover = dict(graph.cover)
    members = dict(graph.members)
    aliases = dict(graph.aliases)
    edge_labels = dict(graph.edge_labels)

    if rel == SUBORDINATING:
        parent[new.id] = target
        if label:
            edge_labels[(target, new.id)] = label
    else:
        existing = cover.get(target)
        if existing is not None:
            members[existing] = members[existing] + (new.id,)
            cover[new.id] = existing
            if abstract_id and abstract_id != existing:
                if abstract_id in nodes or abstract_id in aliases:
                    raise DuplicateId(abstract_id)
                aliases[abstract_id] = existing
        else:
            ab_id = abstract_id or _auto_abstract_id(graph)
            if ab_id in nodes or ab_id in aliases:
                raise DuplicateId(ab_id)
            nodes[ab_id] = EventNode(ab_id, "abstract")
            members[ab_id] = (target, new.id)
            cover[target] = ab_id
            cover[new.id] = ab_id
            if target in parent:
                parent[ab_id] = parent[target]
        coor_edges = coor_edges + ((target, new.id),)
        if label:
            edge_labels[(target, new.id)] = label

    return DiscourseGraph(nodes=nodes, parent=parent, coor_edges=coor_edges,
                          cover=cover, members=members, aliases=aliases,
                          edge_labels=edge_labels, last_attached=new.id)


def _auto_abstract_id(graph: DiscourseGraph) -> str:
    count = sum(1 for n in graph.nodes.values() if n.kind == "abstract")
    return "ec" if count == 0 else f"ec{count + 1}"


def right_frontier(graph: DiscourseGraph) -> list[EventNode]:
    """Accessible nodes, most recent first: the walk up from last_attached,
    through covers before parents. Concrete nodes left of a cover are
    excluded by construction."""
    if not graph.nodes:
        raise EmptyGraph("the graph has no nodes")
    out = []
    seen = set()
    current = graph.last_attached
    while current is not None and current not in seen:
        seen.add(current)
        out.append(graph.nodes[current])
        cov = graph.cover.get(current)
        if cov is not None and cov not in seen:
            current = cov
        else:
            current = graph.parent.get(current)
    return out


def _frontier_ids(graph: DiscourseGraph) -> set:
    return {n.id for n in right_frontier(graph)}


def eval_del(graph: DiscourseGraph, ctx: list) -> list:
    """Filter a context label list down to the right frontier, preserving
    order. Idempotent; always a subsequence of the input."""
    frontier = _frontier_ids(graph)
    return [label for label in ctx if _resolve_id(graph, label) in frontier]


def eval_sel(graph: DiscourseGraph, ctx: list,
             strategy: SelStrategy = MostRecent()) -> EventNode:
    """Pick an antecedent event among the frontier members of ``ctx``."""
    frontier = _frontier_ids(graph)
    match strategy:
        case MostRecent():
            for label in ctx:
                node_id = _resolve_id(graph, label)
                if node_id in frontier:
                    return graph.nodes[node_id]
            raise NoAntecedent(f"no accessible event in {ctx}")
        case FixedTarget(node_id):
            node_id = _resolve_id(graph, node_id)
            if node_id not in frontier:
                raise InaccessibleTarget(node_id)
            return graph.nodes[node_id]
        case Callback(fn):
            picked = fn(graph, list(ctx))
            if isinstance(picked, EventNode):
                return picked
            return graph.nodes[_resolve_id(graph, picked)]
    raise TypeError(f"not a selection strategy: {strategy!r}")


def selectable(graph: DiscourseGraph, label: str) -> bool:
    """True when the node or any cover above it sits on the frontier. A
    coordination blocks its target for future attachment, but the antecedent
    it related to stays reachable through the covering abstract node; this is
    the accessibility notion the resolution pass uses for Sel."""
    frontier = _frontier_ids(graph)
    node_id = _resolve_id(graph, label)
    while node_id is not None:
        if node_id in frontier:
            return True
        node_id = graph.cover.get(node_id)
    return False


# --------------------------------------------------------------------------
# Term resolution


def _decode_context(term: Term):
    """Split a concrete context list term into (labels, frozen tail)."""
    labels = []
    while isinstance(term, Cons):
        if not isinstance(term.head, Var):
            raise ResolutionError(
                f"context list element is not an event label: {term.head!r}")
        labels.append(term.head.name)
        term = term.tail
    if not (isinstance(term, Const) and term.name in ("A", "nil")):
        raise ResolutionError(f"context list tail is not concrete: {term!r}")
    return labels, term


def _pick_label(graph: DiscourseGraph, labels: list,
                strategy: SelStrategy) -> str:
    match strategy:
        case MostRecent():
            for label in labels:
                if selectable(graph, label):
                    return label
            raise NoAntecedent(f"no accessible event in {labels}")
        case FixedTarget(node_id):
            wanted = _resolve_id(graph, node_id)
            for label in labels:
                if _resolve_id(graph, label) == wanted:
                    if not selectable(graph, label):
                        raise InaccessibleTarget(node_id)
                    return label
            raise NoAntecedent(f"{node_id} does not occur in {labels}")
        case Callback(fn):
            picked = fn(graph, list(labels))
            if isinstance(picked, EventNode):
                picked = picked.id
            if picked not in labels:
                raise NoAntecedent(f"{picked} does not occur in {labels}")
            return picked
    raise TypeError(f"not a selection strategy: {strategy!r}")


def resolve_term(graph: DiscourseGraph, term: Term,
                 strategy: SelStrategy = MostRecent()) -> Term:
    """Evaluate Del and event-typed Sel applications against the graph.

    Del(l) filters l down to the frontier; Sel(l) is replaced by the event
    variable the strategy picks from l (reachability through covers counts,
    since the antecedent of a coordination is blocked for future attachment
    but not for the relation recorded at composition time). Individual-typed
    Sel applications are left symbolic; their list arguments are still
    resolved. Terms without Sel/Del come back unchanged."""

    def resolve(t):
        match t:
            case App(Const("Del", _), arg):
                labels, tail = _decode_context(resolve(arg))
                frontier = _frontier_ids(graph)
                kept = [l for l in labels if _resolve_id(graph, l) in frontier]
                out = tail
                for label in reversed(kept):
                    out = Cons(Var(label), out)
                return out
            case App(Const("Sel", sel_ty), arg) if getattr(sel_ty, "cod", None) == EVENT:
                labels, _ = _decode_context(resolve(arg))
                return Var(_pick_label(graph, labels, strategy))
            case App(f, a):
                return App(resolve(f), resolve(a))
            case And(l, r):
                return And(resolve(l), resolve(r))
            case Cons(h, tl):
                return Cons(resolve(h), resolve(tl))
            case Lam(v, ty, b):
                return Lam(v, ty, resolve(b))
            case Exists(v, ty, b):
                return Exists(v, ty, resolve(b))
            case _:
                return t

    return resolve(term)


# --------------------------------------------------------------------------
# Export


def to_json_dict(graph: DiscourseGraph) -> dict:
    frontier = [] if not graph.nodes else [n.id for n in right_frontier(graph)]
    return {
        "nodes": [{"id": n.id, "kind": n.kind, "label": n.id}
                  for n in graph.nodes.values()],
        "sub_edges": [[p, c] for c, p in graph.parent.items()],
        "coor_edges": [list(pair) for pair in graph.coor_edges],
        "covers": {ab: list(ms) for ab, ms in graph.members.items()},
        "frontier": frontier,
    }


def to_json(graph: DiscourseGraph) -> str:
    return json.dumps(to_json_dict(graph), indent=2)


def to_dot(graph: DiscourseGraph) -> str:
    """DOT rendering: vertical edges solid, horizontal dashed, abstract nodes
    boxed, frontier nodes highlighted."""
    frontier = set() if not graph.nodes else _frontier_ids(graph)
    lines = ["digraph discourse {", "  rankdir=TB;"]
    for node in graph.nodes.values():
        attrs = [f'label="{node.id}"']
        attrs.append("shape=box" if node.kind == "abstract" else "shape=ellipse")
        if node.id in frontier:
            attrs.append("style=filled")
            attrs.append("fillcolor=lightblue")
        lines.append(f'  "{node.id}" [{", ".join(attrs)}];')
    for child, parent in graph.parent.items():
        attrs = ["style=solid"]
        rel = graph.edge_labels.get((parent, child))
        if rel:
            attrs.append(f'label="{rel}"')
        lines.append(f'  "{parent}" -> "{child}" [{", ".join(attrs)}];')
    for left, right in graph.coor_edges:
        attrs = ["style=dashed", "dir=none", "constraint=false"]
        rel = graph.edge_labels.get((left, right))
        if rel:
            attrs.append(f'label="{rel}"')
        lines.append(f'  "{left}" -> "{right}" [{", ".join(attrs)}];')
    for abstract, member_ids in graph.members.items():
        for member in member_ids:
            lines.append(f'  "{abstract}" -> "{member}" [style=dotted, arrowhead=none];')
    lines.append("}")
    return "\n".join(lines) + "\n"
