"""Exception hierarchy shared by every module of the package."""


class GCError(Exception):
    """Base class for all package errors."""


class IdenticalPoints(GCError, ValueError):
    pass


class NotDivisible(GCError, ArithmeticError):
    pass


class SizeMismatch(GCError, ValueError):
    pass


class NotCorrect(GCError):
    """The node set is not n-correct (singular collocation matrix)."""


class NodeAbsent(GCError, KeyError):
    pass


class TooManyCollinear(GCError, ValueError):
    """Some line carries at least n+2 nodes of a degree-n set."""


class NotFullyFactorable(GCError):
    """A fundamental polynomial kept a nonconstant residual after peeling."""

    def __init__(self, node, lines, residual, diagnostics=None):
        self.node = node
        self.lines = lines
        self.residual = residual
        self.diagnostics = diagnostics or {}
        super().__init__(
            f"fundamental polynomial of {node} has residual of degree "
            f"{residual.total_degree()} after peeling {len(lines)} lines"
        )


class GenerationFailed(GCError):
    pass


class CharacterizationViolated(GCError):
    pass


class SingularTransform(GCError, ValueError):
    pass


class TooFewNodes(GCError, ValueError):
    pass


class NonTermination(GCError):
    pass


class OracleMismatch(GCError):
    pass


class MalformedInput(GCError, ValueError):
    """A JSON document does not follow the node set schema."""
