"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A physical or computational parameter violates its domain constraints."""


class SolverError(RuntimeError):
    """A numerical routine failed to converge or to meet its accuracy contract."""
