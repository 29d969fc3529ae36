"""Sentence and discourse composition.

Sentences are built by applying lexicon entries along an application tree
and beta-normalizing. Discourses are built from sentences by one of two
composition families:

* subordinating -- the new event is existentially bound inside the previous
  discourse's continuation; all previously accessible events stay accessible.
* coordinating  -- additionally binds an abstract group event ``ec`` and
  prunes the context list with the symbolic ``Del`` operator.

Both families have a basic variant, used exactly when the previous discourse
is the empty one, and an advanced variant that records a discourse relation
``Rel`` between the selected antecedent and the new event. Sel and Del stay
symbolic in the output; evaluating them against an accessibility graph is a
separate pass (see ``graph.resolve_term``).

The existential binders introduced by composition are renamed canonically
(e1, e2, ... for sentence events, ec, ec2, ... for abstract events) so that
formulas line up with graph node labels.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    And, App, Arrow, Cons, CTX, EVENT, Exists, Lam, PROP, Term, Var,
    alpha_equal, app, beta_normalize, exists_prefix, free_vars, lam,
    subst_many, typecheck, DEL, FREEZE_A, FREEZE_B, REL2, REL3, SEL_EVENT,
)
from .errors import AdvancedOnEmpty, BasicOnNonEmpty, TypeMismatch
from .lexicon import Lexicon, SENTENCE_TYPES, S_BASELINE, S_EVENT

# --------------------------------------------------------------------------
# Application trees


@dataclass(frozen=True)
class Leaf:
    word: str


@dataclass(frozen=True)
class Node:
    fun: "AppTree"
    arg: "AppTree"


AppTree = Leaf | Node


def tree_text(tree: AppTree) -> str:
    match tree:
        case Leaf(word):
            return word
        case Node(fun, arg):
            return f"({tree_text(fun)} {tree_text(arg)})"
    raise TypeError(f"not an application tree: {tree!r}")


@dataclass(frozen=True)
class SentenceMeaning:
    term: Term
    mode: str


@dataclass(frozen=True)
class DiscourseMeaning:
    term: Term
    events: tuple  # event labels in binder order


DISCOURSE_TYPE = S_BASELINE  # g -> (g -> t) -> t


def _float_continuation(term: Term) -> Term:
    """Move conjuncts that mention a right-context binder (type g -> t) to
    the end of the sentence body, keeping both groups in order. Modifier
    entries wrap the verb's continuation conjunct, so a literal reduction
    leaves it mid-formula; conjunction is commutative, and sentence bodies
    conventionally end with the continuation."""
    lams = []
    body = term
    while isinstance(body, Lam):
        lams.append((body.var, body.var_type))
        body = body.body
    ctx_vars = {v for v, ty in lams if ty == Arrow(CTX, PROP)}
    if not ctx_vars or not isinstance(body, And):
        return term
    parts = []
    node = body
    while isinstance(node, And):
        parts.append(node.left)
        node = node.right
    parts.append(node)
    rebuilt = ([p for p in parts if not (free_vars(p) & ctx_vars)]
               + [p for p in parts if free_vars(p) & ctx_vars])
    out = rebuilt[-1]
    for p in reversed(rebuilt[:-1]):
        out = And(p, out)
    return lam(lams, out)


def build_sentence(lexicon: Lexicon, tree: AppTree) -> SentenceMeaning:
    """Resolve leaves in the lexicon, fold the applications, normalize, and
    check the result against the mode's sentence type."""

    def build(t):
        match t:
            case Leaf(word):
                return lexicon.lookup(word).term
            case Node(fun, arg):
                return App(build(fun), build(arg))
        raise TypeError(f"not an application tree: {t!r}")

    term = _float_continuation(beta_normalize(build(tree)))
    expected = SENTENCE_TYPES[lexicon.mode]
    actual = typecheck(term)
    if actual != expected:
        raise TypeMismatch(tree_text(tree), expected, actual)
    return SentenceMeaning(term, lexicon.mode)


# --------------------------------------------------------------------------
# End-of-sentence closure


def _eos_term(variant: str) -> Term:
    if variant == "static":
        return Lam("P", Arrow(EVENT, PROP),
                   Exists("e", EVENT, App(Var("P"), Var("e"))))
    return Lam("P", S_EVENT,
               Exists("e", EVENT,
                      app(Var("P"), Var("e"), FREEZE_A, FREEZE_B)))


def eos_close(sentence: SentenceMeaning, variant: str) -> Term:
    """Existentially close the event variable. The static variant applies to
    static-mode sentences (v -> t); the dynamic variant applies to event-mode
    sentences and freezes both contexts with the constants A and B."""
    if variant not in ("static", "dynamic"):
        raise ValueError(f"unknown closure variant: {variant}")
    wanted = "static" if variant == "static" else "event"
    if sentence.mode != wanted:
        raise TypeMismatch(f"{variant} closure", f"a {wanted}-mode sentence",
                           f"a {sentence.mode}-mode sentence")
    return beta_normalize(App(_eos_term(variant), sentence.term))


# --------------------------------------------------------------------------
# Baseline merging


def merge_baseline(discourse: Term, sentence: Term) -> Term:
    """Merge a baseline sentence into a baseline discourse: the discourse is
    run with a continuation that evaluates the sentence in the updated
    context."""
    for name, t in (("discourse", discourse), ("sentence", sentence)):
        actual = typecheck(t)
        if actual != S_BASELINE:
            raise TypeMismatch(name, S_BASELINE, actual)
    merged = lam(
        [("e", CTX), ("phi", Arrow(CTX, PROP))],
        app(discourse, Var("e"),
            Lam("e2", CTX, app(sentence, Var("e2"), Var("phi")))),
    )
    return beta_normalize(merged)


# --------------------------------------------------------------------------
# Discourse composition


def empty_discourse() -> DiscourseMeaning:
    term = lam([("a", CTX), ("b", Arrow(CTX, PROP))],
               App(Var("b"), Var("a")))
    return DiscourseMeaning(term, ())


def is_empty(discourse: DiscourseMeaning) -> bool:
    return alpha_equal(discourse.term, empty_discourse().term)


def _combinator(kind: str, variant: str) -> Term:
    head = [("D", DISCOURSE_TYPE), ("S", S_EVENT),
            ("a", CTX), ("b", Arrow(CTX, PROP))]
    s_applied = app(Var("S"), Var("e"), Var("a2"), Var("b"))
    if variant == "basic":
        # Both basic combinators coincide: the first sentence carries no
        # discourse relation.
        body = Exists("e", EVENT, s_applied)
        return lam(head, app(Var("D"), Var("a"), Lam("a2", CTX, body)))
    if kind == "sub":
        body = Exists("e", EVENT,
                      And(s_applied,
                          app(REL2, App(SEL_EVENT, Var("a2")), Var("e"))))
        return lam(head, app(Var("D"), Var("a"), Lam("a2", CTX, body)))
    # Coordinating advanced: bind the abstract group event outermost, push it
    # onto the pruned context, and relate antecedent, new event and group.
    s_applied = app(Var("S"), Var("e"),
                    Cons(Var("ec"), App(DEL, Var("a2"))), Var("b"))
    body = Exists("e", EVENT,
                  And(s_applied,
                      app(REL3, App(SEL_EVENT, Var("a2")), Var("e"), Var("ec"))))
    return lam(head,
               Exists("ec", EVENT,
                      app(Var("D"), Var("a"), Lam("a2", CTX, body))))


def sub_basic_term() -> Term:
    return _combinator("sub", "basic")


def sub_advanced_term() -> Term:
    return _combinator("sub", "advanced")


def coor_basic_term() -> Term:
    return _combinator("coor", "basic")


def coor_advanced_term() -> Term:
    return _combinator("coor", "advanced")


def next_event_label(events) -> str:
    concrete = [e for e in events if not e.startswith("ec")]
    return f"e{len(concrete) + 1}"


def next_abstract_label(events) -> str:
    abstract = [e for e in events if e.startswith("ec")]
    return "ec" if not abstract else f"ec{len(abstract) + 1}"


def _relabel_prefix(term: Term, labels) -> Term:
    """Rename the first len(labels) existential binders under any leading
    lambdas positionally. Normalization freshens hoisted binders, so the
    canonical event labels are reapplied after every normalize; the body's
    only free variables are the context binders, so the labels can never be
    captured."""
    lams = []
    rest = term
    while isinstance(rest, Lam):
        lams.append((rest.var, rest.var_type))
        rest = rest.body
    binders, body = exists_prefix(rest)
    if len(binders) < len(labels):
        raise RuntimeError("composition produced fewer event binders than expected")
    renamed = list(labels) + [name for name, _ in binders[len(labels):]]
    mapping = {old: Var(new)
               for (old, _), new in zip(binders, renamed) if old != new}
    body = subst_many(body, mapping)
    for (_, ty), new in zip(reversed(binders), reversed(renamed)):
        body = Exists(new, ty, body)
    return lam(lams, body)


def _pick_variant(discourse: DiscourseMeaning, variant: str | None) -> str:
    empty = is_empty(discourse)
    if variant is None:
        return "basic" if empty else "advanced"
    if variant == "basic" and not empty:
        raise BasicOnNonEmpty("basic composition needs the empty discourse")
    if variant == "advanced" and empty:
        raise AdvancedOnEmpty("advanced composition needs a previous sentence")
    if variant not in ("basic", "advanced"):
        raise ValueError(f"unknown composition variant: {variant}")
    return variant


def _compose(kind: str, discourse: DiscourseMeaning, sentence: SentenceMeaning,
             variant: str | None) -> DiscourseMeaning:
    variant = _pick_variant(discourse, variant)
    if sentence.mode != "event":
        raise TypeMismatch("composition", "an event-mode sentence",
                           f"a {sentence.mode}-mode sentence")
    combinator = _combinator(kind, variant)
    term = beta_normalize(app(combinator, discourse.term, sentence.term))
    labels = list(discourse.events) + [next_event_label(discourse.events)]
    if kind == "coor" and variant == "advanced":
        labels = [next_abstract_label(discourse.events)] + labels
    term = _relabel_prefix(term, labels)
    actual = typecheck(term)
    if actual != DISCOURSE_TYPE:
        raise TypeMismatch("composition result", DISCOURSE_TYPE, actual)
    return DiscourseMeaning(term, tuple(labels))


def compose_sub(discourse: DiscourseMeaning, sentence: SentenceMeaning,
                variant: str | None = None) -> DiscourseMeaning:
    return _compose("sub", discourse, sentence, variant)


def compose_coor(discourse: DiscourseMeaning, sentence: SentenceMeaning,
                 variant: str | None = None) -> DiscourseMeaning:
    return _compose("coor", discourse, sentence, variant)


def finalize(discourse: DiscourseMeaning) -> Term:
    """Apply the freezing constants: a closed term of type t (modulo the
    symbolic Sel/Del applications left in place)."""
    closed = beta_normalize(app(discourse.term, FREEZE_A, FREEZE_B))
    return _relabel_prefix(closed, discourse.events)


def discourse_from_term(term: Term) -> DiscourseMeaning:
    """Reconstruct a DiscourseMeaning from a canonical discourse term,
    reading the event list off the existential prefix (used for replay)."""
    if not (isinstance(term, Lam) and isinstance(term.body, Lam)):
        raise TypeMismatch("discourse term", DISCOURSE_TYPE, typecheck(term))
    binders, _ = exists_prefix(term.body.body)
    return DiscourseMeaning(term, tuple(name for name, _ in binders))
