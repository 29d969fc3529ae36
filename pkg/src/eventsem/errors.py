"""Exception types shared across the package."""


class SemanticsError(Exception):
    """Base class for every error this package raises deliberately."""


class ParseError(SemanticsError):
    """Malformed concrete syntax. Carries the source span of the offence."""

    def __init__(self, message, span=None):
        self.span = span
        if span is not None:
            message = f"{span.line}:{span.column}: {message}"
        super().__init__(message)


class TypeMismatch(SemanticsError):
    def __init__(self, location, expected, found):
        self.location = location
        self.expected = expected
        self.found = found
        super().__init__(
            f"type mismatch at {location}: expected {expected}, found {found}"
        )


class UnboundVariable(SemanticsError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unbound variable: {name}")


class NotAProposition(SemanticsError):
    """Raised by conjunct operations on terms that are not of type t."""


class UnknownWord(SemanticsError):
    def __init__(self, word):
        self.word = word
        super().__init__(f"word not in lexicon: {word}")


class EmptyTemplate(SemanticsError):
    """A verb template must carry at least one thematic role."""


class BasicOnNonEmpty(SemanticsError):
    """The basic composition variant only applies to the empty discourse."""


class AdvancedOnEmpty(SemanticsError):
    """The advanced composition variant needs a non-empty discourse."""


class InaccessibleTarget(SemanticsError):
    def __init__(self, target):
        self.target = target
        super().__init__(f"node is not on the right frontier: {target}")


class DuplicateId(SemanticsError):
    def __init__(self, node_id):
        self.node_id = node_id
        super().__init__(f"node id already in graph: {node_id}")


class EmptyGraph(SemanticsError):
    """Frontier queries need at least one node."""


class ResolutionError(SemanticsError):
    """Base class for failures while evaluating Sel/Del against a graph."""


class NoAntecedent(ResolutionError):
    """Selection found no accessible candidate in the context list."""


class UnknownLabel(ResolutionError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"context label does not name a graph node: {label}")


class ScriptError(SemanticsError):
    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")
