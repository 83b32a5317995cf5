"""Exception types shared across the package."""


class DegenerateModeError(ValueError):
    """A momentum kernel was evaluated at a point where it is singular.

    The singularities are removable (measure-zero in k); callers should
    perturb the momentum or use the shifted quadrature grid, which never
    samples them.
    """


class QuadratureError(RuntimeError):
    """A quadrature result failed its grid-doubling residual check."""


class OrderingError(ValueError):
    """Input curves violate an ordering precondition (e.g. equal starts)."""
