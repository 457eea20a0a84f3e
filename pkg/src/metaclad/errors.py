"""Exception types shared across the toolkit."""


class ConvergenceError(RuntimeError):
    """Modal truncation failed to certify convergence below the cap.

    Carries the tail ratio that was actually achieved so callers can report
    how far the expansion was from the certificate.
    """

    def __init__(self, message, tail_ratio=None):
        super().__init__(message)
        self.tail_ratio = tail_ratio


class SingularHarmonicError(RuntimeError):
    """A per-harmonic boundary system is exactly singular (real resonance)."""

    def __init__(self, order):
        super().__init__(
            f"boundary system singular at harmonic n={order}; "
            "the admittance sits exactly on a resonance"
        )
        self.order = order


class InfeasibleTargetError(RuntimeError):
    """No parameter value can satisfy the requested target."""
