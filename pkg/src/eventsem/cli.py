"""Batch driver: discourse scripts in, formulas/graphs/traces out.

Script grammar (line-oriented, ``#`` comments):

    mode event|baseline
    lexicon <path>                      # merged over the built-in lexicon
    S<i> := <apptree>                   # word | (f x) | (f x y) nesting
    D<i> := compose <sub|coor> <Dprev|Empty> S<j> [target=<event>] [label=<Name>]
    resolve on|off
    print <name> [fol|trace]
    emit <dot|json|fol|trace> <path>

Exit codes: 0 ok, 1 parse error, 2 type error, 3 accessibility error,
4 resolution error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import graph as graphmod
from .composer import (
    AppTree, DiscourseMeaning, Leaf, Node, SentenceMeaning, build_sentence,
    compose_coor, compose_sub, empty_discourse, finalize, merge_baseline,
    tree_text,
)
from .core import reset_fresh_names
from .errors import (
    DuplicateId, EmptyGraph, InaccessibleTarget, ParseError, ResolutionError,
    ScriptError, SemanticsError, TypeMismatch, NotAProposition,
    UnboundVariable, UnknownWord, BasicOnNonEmpty, AdvancedOnEmpty,
    EmptyTemplate,
)
from .graph import (
    COORDINATING, DiscourseGraph, EventNode, FixedTarget, MostRecent,
    SUBORDINATING, SelStrategy, attach, empty_graph, resolve_term, to_dot,
    to_json_dict,
)
from .lexicon import Lexicon, LexEntry, builtin_lexicon
from .syntax import parse_lexicon, render

# --------------------------------------------------------------------------
# Script statements


@dataclass(frozen=True)
class SetMode:
    mode: str


@dataclass(frozen=True)
class LoadLexicon:
    path: str


@dataclass(frozen=True)
class DefineSentence:
    name: str
    tree: AppTree


@dataclass(frozen=True)
class Compose:
    name: str
    rel: str           # "sub" | "coor"
    prev: str          # discourse name or "Empty"
    sentence: str
    target: str | None = None
    label: str | None = None


@dataclass(frozen=True)
class Print:
    name: str
    format: str = "fol"


@dataclass(frozen=True)
class Resolve:
    on: bool


@dataclass(frozen=True)
class Emit:
    what: str
    path: str


@dataclass(frozen=True)
class Script:
    statements: tuple  # of (line_no, text, statement)


def parse_apptree(text: str) -> AppTree:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()

    def parse(pos):
        if pos >= len(tokens):
            raise ParseError("unexpected end of application tree")
        tok = tokens[pos]
        if tok == "(":
            node, pos = parse(pos + 1)
            while pos < len(tokens) and tokens[pos] != ")":
                arg, pos = parse(pos)
                node = Node(node, arg)
            if pos >= len(tokens):
                raise ParseError("missing ')' in application tree")
            return node, pos + 1
        if tok == ")":
            raise ParseError("unexpected ')' in application tree")
        return Leaf(tok), pos + 1

    tree, pos = parse(0)
    if pos != len(tokens):
        raise ParseError(f"unexpected input after application tree: {tokens[pos]!r}")
    return tree


def parse_script(text: str) -> Script:
    statements = []
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            statements.append((line_no, line, _parse_statement(line)))
        except SemanticsError as err:
            raise ScriptError(line_no, str(err)) from err
    return Script(tuple(statements))


def _parse_statement(line: str):
    words = line.split()
    if words[0] == "mode" and len(words) == 2:
        if words[1] not in ("event", "baseline"):
            raise ParseError(f"unknown mode: {words[1]}")
        return SetMode(words[1])
    if words[0] == "lexicon" and len(words) == 2:
        return LoadLexicon(words[1])
    if words[0] == "resolve" and len(words) == 2 and words[1] in ("on", "off"):
        return Resolve(words[1] == "on")
    if words[0] == "print" and len(words) in (2, 3):
        fmt = words[2] if len(words) == 3 else "fol"
        if fmt not in ("fol", "trace"):
            raise ParseError(f"unknown print format: {fmt}")
        return Print(words[1], fmt)
    if words[0] == "emit" and len(words) == 3:
        if words[1] not in ("dot", "json", "fol", "trace"):
            raise ParseError(f"unknown emit format: {words[1]}")
        return Emit(words[1], words[2])
    if len(words) >= 3 and words[1] == ":=":
        name = words[0]
        if not name.isidentifier():
            raise ParseError(f"bad name: {name!r}")
        if words[2] == "compose":
            if len(words) < 6:
                raise ParseError("expected: compose <sub|coor> <Dprev|Empty> S<j>")
            rel = words[3]
            if rel not in ("sub", "coor"):
                raise ParseError(f"unknown relation class: {rel}")
            target = label = None
            for extra in words[6:]:
                if extra.startswith("target="):
                    target = extra.split("=", 1)[1]
                elif extra.startswith("label="):
                    label = extra.split("=", 1)[1]
                else:
                    raise ParseError(f"unknown compose option: {extra}")
            return Compose(name, rel, words[4], words[5], target, label)
        return DefineSentence(name, parse_apptree(line.split(":=", 1)[1]))
    raise ParseError(f"cannot parse statement: {line!r}")


# --------------------------------------------------------------------------
# Derivation sessions


@dataclass(frozen=True)
class DiscourseState:
    """The unit threaded through composition: the discourse meaning so far
    plus the accessibility graph snapshot it was built against."""
    meaning: DiscourseMeaning
    graph: DiscourseGraph
    graph_index: int = 0  # index into the trace's graph snapshots


class Derivation:
    """One discourse derivation: sentences, named discourse states, the
    step trace, and the active lexicon. Sequential by nature."""

    def __init__(self, mode: str, lexicon: Lexicon | None = None,
                 strategy: SelStrategy = MostRecent(), style: str = "unicode",
                 resolve: bool = False):
        reset_fresh_names()
        self.mode = mode
        self.lexicon = lexicon or builtin_lexicon(mode)
        self.strategy = strategy
        self.style = style
        self.resolve = resolve
        self.sentences: dict[str, SentenceMeaning] = {}
        self.states: dict[str, DiscourseState] = {}
        self.last_discourse: str | None = None
        self.steps: list[dict] = []
        self.graphs: list[dict] = [to_json_dict(empty_graph())]

    # -- building blocks

    def load_lexicon(self, text: str):
        parsed = parse_lexicon(text)
        if parsed.mode != self.mode:
            raise TypeMismatch("lexicon file", f"mode {self.mode}",
                               f"mode {parsed.mode}")
        entries = [LexEntry(word, ty, term) for word, ty, term in parsed.entries]
        self.lexicon = self.lexicon.extended(entries)

    def define_sentence(self, name: str, tree: AppTree):
        self.sentences[name] = build_sentence(self.lexicon, tree)

    def _snapshot(self, g: DiscourseGraph) -> int:
        self.graphs.append(to_json_dict(g))
        return len(self.graphs) - 1

    def _record(self, op: str, inputs: list[str], output, graph_index: int):
        self.steps.append({
            "op": op,
            "inputs": inputs,
            "output": render(output, self.style),
            "graph": graph_index,
        })

    def compose(self, name: str, rel: str, prev: str, sentence_name: str,
                target: str | None = None, label: str | None = None):
        sentence = self.sentences.get(sentence_name)
        if sentence is None:
            raise UnknownWord(sentence_name)
        if self.mode == "baseline":
            self._compose_baseline(name, prev, sentence, sentence_name)
            return
        if prev == "Empty":
            state = DiscourseState(empty_discourse(), empty_graph())
        elif prev in self.states:
            state = self.states[prev]
        else:
            raise ParseError(f"unknown discourse: {prev}")
        compose_fn = compose_sub if rel == "sub" else compose_coor
        meaning = compose_fn(state.meaning, sentence)
        new_events = [e for e in meaning.events if e not in state.meaning.events]
        concrete = [e for e in new_events if not e.startswith("ec")][0]
        abstract = [e for e in new_events if e.startswith("ec")]
        node = EventNode(concrete, "concrete",
                         sentence_index=len(state.meaning.events) + 1)
        if not state.meaning.events:
            g = attach(state.graph, node)
        else:
            g = attach(state.graph, node,
                       SUBORDINATING if rel == "sub" else COORDINATING,
                       target, abstract_id=abstract[0] if abstract else None,
                       label=label)
        index = self._snapshot(g)
        self.states[name] = DiscourseState(meaning, g, index)
        self.last_discourse = name
        variant = "basic" if not state.meaning.events else "advanced"
        self._record(f"compose_{rel}.{variant}",
                     [render(state.meaning.term, self.style),
                      render(sentence.term, self.style)],
                     meaning.term, index)

    def _compose_baseline(self, name, prev, sentence, sentence_name):
        if prev == "Empty":
            # The first baseline sentence is the discourse: no merge happens.
            meaning = DiscourseMeaning(sentence.term, ())
            self.states[name] = DiscourseState(meaning, empty_graph())
            self.last_discourse = name
            self._record("init", [render(sentence.term, self.style)],
                         meaning.term, 0)
            return
        if prev not in self.states:
            raise ParseError(f"unknown discourse: {prev}")
        state = self.states[prev]
        merged = merge_baseline(state.meaning.term, sentence.term)
        meaning = DiscourseMeaning(merged, ())
        self.states[name] = DiscourseState(meaning, state.graph)
        self.last_discourse = name
        self._record("merge_baseline",
                     [render(state.meaning.term, self.style),
                      render(sentence.term, self.style)],
                     merged, 0)

    # -- output

    def formula_for(self, name: str) -> str:
        if name in self.sentences:
            return render(self.sentences[name].term, self.style)
        if name in self.states:
            state = self.states[name]
            term = state.meaning.term
            if self.resolve and self.mode != "baseline":
                term = resolve_term(state.graph, finalize(state.meaning),
                                    self.strategy)
                self._record("finalize",
                             [render(state.meaning.term, self.style)],
                             term, state.graph_index)
            return render(term, self.style)
        raise ParseError(f"unknown name: {name}")

    def trace(self) -> dict:
        return {"steps": list(self.steps), "graphs": list(self.graphs)}

    def current_state(self) -> DiscourseState:
        if self.last_discourse is None:
            return DiscourseState(empty_discourse(), empty_graph())
        return self.states[self.last_discourse]


def emit_trace(trace: dict) -> str:
    return json.dumps(trace, indent=2)


def replay_trace(trace: dict):
    """Re-run the composition steps from their recorded inputs and return the
    final term; used to check that a trace reproduces the derivation."""
    from .composer import discourse_from_term
    from .syntax import parse_term

    final = None
    for step in trace["steps"]:
        op = step["op"]
        if op.startswith("compose_"):
            rel, variant = op.split("_", 1)[1].split(".")
            d_term = parse_term(step["inputs"][0])
            s_term = parse_term(step["inputs"][1])
            fn = compose_sub if rel == "sub" else compose_coor
            out = fn(discourse_from_term(d_term), SentenceMeaning(s_term, "event"),
                     variant)
            final = out.term
        elif op == "merge_baseline":
            final = merge_baseline(parse_term(step["inputs"][0]),
                                   parse_term(step["inputs"][1]))
        elif op == "init":
            final = parse_term(step["inputs"][0])
    return final


# --------------------------------------------------------------------------
# Script execution

_EXIT_PARSE = 1
_EXIT_TYPE = 2
_EXIT_ACCESS = 3
_EXIT_RESOLVE = 4


def _exit_code(err: Exception) -> int:
    if isinstance(err, (InaccessibleTarget, DuplicateId, EmptyGraph)):
        return _EXIT_ACCESS
    if isinstance(err, ResolutionError):
        return _EXIT_RESOLVE
    if isinstance(err, (TypeMismatch, UnknownWord, NotAProposition,
                        UnboundVariable, BasicOnNonEmpty, AdvancedOnEmpty,
                        EmptyTemplate)):
        return _EXIT_TYPE
    return _EXIT_PARSE


def run_script(text: str, mode: str | None = None, resolve: bool = False,
               style: str = "unicode", sel: str = "most-recent",
               emit: str | None = None, base_dir: str | Path = ".",
               stdout=None, stderr=None) -> int:
    """Execute a discourse script. Returns the exit status; prints requested
    formulas to ``stdout`` and the first error to ``stderr``."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    base_dir = Path(base_dir)

    if sel == "most-recent":
        strategy: SelStrategy = MostRecent()
    elif sel.startswith("target="):
        strategy = FixedTarget(sel.split("=", 1)[1])
    else:
        print(f"unknown selection strategy: {sel}", file=stderr)
        return _EXIT_PARSE

    try:
        script = parse_script(text)
    except ScriptError as err:
        print(str(err), file=stderr)
        return _EXIT_PARSE

    session: Derivation | None = None
    script_mode = mode
    if script_mode is None:
        for _, _, stmt in script.statements:
            if isinstance(stmt, SetMode):
                script_mode = stmt.mode
                break
    if script_mode is None:
        print("no mode set (use 'mode event' or 'mode baseline')", file=stderr)
        return _EXIT_PARSE

    session = Derivation(script_mode, strategy=strategy, style=style,
                         resolve=resolve)

    for line_no, line, stmt in script.statements:
        try:
            match stmt:
                case SetMode():
                    pass  # applied above; --mode overrides it
                case LoadLexicon(path):
                    session.load_lexicon((base_dir / path).read_text())
                case DefineSentence(name, tree):
                    session.define_sentence(name, tree)
                case Compose(name, rel, prev, sentence, target, label):
                    session.compose(name, rel, prev, sentence, target, label)
                case Resolve(on):
                    session.resolve = on
                case Print(name, fmt):
                    if fmt == "trace":
                        print(emit_trace(session.trace()), file=stdout)
                    else:
                        print(session.formula_for(name), file=stdout)
                case Emit(what, path):
                    (base_dir / path).write_text(_emission(session, what))
        except OSError as err:
            print(f"line {line_no}: {line}: {err}", file=stderr)
            return _EXIT_PARSE
        except SemanticsError as err:
            print(f"line {line_no}: {line}: {type(err).__name__}: {err}",
                  file=stderr)
            return _exit_code(err)

    if emit is not None:
        try:
            print(_emission(session, emit), end="", file=stdout)
        except SemanticsError as err:
            print(f"{type(err).__name__}: {err}", file=stderr)
            return _exit_code(err)
    return 0


def _emission(session: Derivation, what: str) -> str:
    state = session.current_state()
    if what == "fol":
        if session.last_discourse is None:
            raise ParseError("no discourse to emit")
        return session.formula_for(session.last_discourse) + "\n"
    if what == "dot":
        return to_dot(state.graph)
    if what == "json":
        return graphmod.to_json(state.graph) + "\n"
    if what == "trace":
        return emit_trace(session.trace()) + "\n"
    raise ParseError(f"unknown emission: {what}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="eventsem",
        description="Run a discourse derivation script.")
    parser.add_argument("script", help="script path, or '-' for stdin")
    parser.add_argument("--mode", choices=["event", "baseline"],
                        help="override the script's mode statement")
    parser.add_argument("--resolve", action="store_true",
                        help="evaluate Sel/Del against the accessibility graph "
                             "when printing (default: leave them symbolic)")
    parser.add_argument("--style", choices=["ascii", "unicode"],
                        default="unicode")
    parser.add_argument("--sel", default="most-recent", metavar="STRATEGY",
                        help="most-recent (default) or target=<event>")
    parser.add_argument("--emit", choices=["fol", "dot", "json", "trace"],
                        help="print this artifact for the final state")
    args = parser.parse_args(argv)

    if args.script == "-":
        text = sys.stdin.read()
        base_dir = Path.cwd()
    else:
        path = Path(args.script)
        try:
            text = path.read_text()
        except OSError as err:
            print(str(err), file=sys.stderr)
            return _EXIT_PARSE
        base_dir = path.parent
    return run_script(text, mode=args.mode, resolve=args.resolve,
                      style=args.style, sel=args.sel, emit=args.emit,
                      base_dir=base_dir)


if __name__ == "__main__":
    raise SystemExit(main())
