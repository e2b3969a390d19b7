"""Exception types shared by the solver, runner and CLI"""


class ConfigError(ValueError):
    """A configuration or precondition violates a model invariant."""


class NumericalError(RuntimeError):
    """A solver, eigensolver or projection failed to produce a result."""
