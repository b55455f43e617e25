"""Exception types shared across the package.

Every error raised on a data or parameter problem derives from
GraphMapperError so callers (CLI, service) can map them to exit codes /
HTTP statuses in one place.
"""


class GraphMapperError(Exception):
    """Base class for all package errors."""


class ParseError(GraphMapperError):
    """Malformed input bytes. Carries a 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(GraphMapperError):
    """Structurally valid input that violates a data invariant."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParameterError(GraphMapperError):
    """Out-of-range or inconsistent parameters."""


class DisconnectedGraphError(GraphMapperError):
    """Operation needs a connected graph; carries the component count."""

    def __init__(self, message, components):
        self.components = components
        super().__init__(message)


class MultiplicityError(DisconnectedGraphError):
    """Laplacian kernel has dimension > 1 (one per connected component)."""

    def __init__(self, components):
        super().__init__(
            f"graph Laplacian has a {components}-dimensional kernel "
            f"({components} connected components); restrict to one component first",
            components,
        )
        self.kernel_dimension = components


class ConvergenceError(GraphMapperError):
    """Iterative solver hit its iteration cap. Carries the final residual."""

    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (final residual {residual:.3e})")
