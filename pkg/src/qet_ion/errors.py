"""Exception types raised by qet_ion."""


class QETError(Exception):
    """Base class for all library errors."""


class DomainError(QETError, ValueError):
    """An input lies outside the domain of the operation."""


class SolverError(QETError, RuntimeError):
    """An iterative solver failed to converge."""

    def __init__(self, message, residual=None, n_ions=None):
        super().__init__(message)
        self.residual = residual
        self.n_ions = n_ions


class DegeneracyError(QETError, ArithmeticError):
    """Two eigenvalues of the coupling matrix coincide within tolerance."""


class NumericalError(QETError, ArithmeticError):
    """A numerical invariant (positivity, Hermiticity, ...) was violated."""


class ResourceError(QETError, MemoryError):
    """A requested Fock basis exceeds the configured dimension ceiling."""
