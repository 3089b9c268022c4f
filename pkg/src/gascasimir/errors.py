"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the domain where a formula is defined."""


class BranchError(DomainError):
    """Square-root branch of the permittivity is ambiguous (epsilon on the negative real axis)."""


class ConvergenceError(ArithmeticError):
    """A quadrature or series failed to reach its tolerance.

    ``diagnostics`` carries whatever the failing routine knew at the time
    (evaluation counts, last error estimate, tail bound, ...).
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics

    def __str__(self):
        base = super().__str__()
        if not self.diagnostics:
            return base
        extra = ", ".join(f"{k}={v!r}" for k, v in sorted(self.diagnostics.items()))
        return f"{base} ({extra})"
