"""Exception hierarchy shared across the package."""


class ClusterabilityError(Exception):
    """Base class for every error raised by this package."""


class GraphError(ClusterabilityError, ValueError):
    pass


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class BadSign(GraphError):
    pass


class MissingAttribute(ClusterabilityError, KeyError):
    def __str__(self):
        # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class SizeMismatch(ClusterabilityError, ValueError):
    pass


class BadK(ClusterabilityError, ValueError):
    pass


class TooLarge(ClusterabilityError, ValueError):
    pass


class SolutionError(ClusterabilityError, ValueError):
    """A solution file could not be mapped back onto a partition."""


class InconsistentAssignment(SolutionError):
    pass


class ObjectiveMismatch(SolutionError):
    pass


class TransitivityViolation(SolutionError):
    pass
