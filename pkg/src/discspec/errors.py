"""Exception types shared across the package."""


class SolverError(RuntimeError):
    """Numeric failure inside an eigensolver or time stepper."""


class BracketError(RuntimeError):
    """A root or eigenvalue search failed to bracket its target."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not converge (e.g. non-integrable density)."""
