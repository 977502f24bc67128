"""Exceptions shared across the package."""


class ConfigError(ValueError):
    """A run/scene configuration field is missing, malformed, or out of range.

    The message always names the offending field.
    """


class GenerationError(RuntimeError):
    """Stochastic placement could not satisfy the geometric constraints.

    Raised when rejection sampling exhausts its retry budget, e.g. when the
    scene leaves almost no admissible volume in front of a surface. The
    message names the scene geometry that caused it.
    """
