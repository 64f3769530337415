"""Exception types raised across the package."""


class ConfigurationError(ValueError):
    """Unsupported domain, scheme, resolution or malformed configuration."""


class WindowError(ValueError):
    """Exponents or kernel parameters fall outside an admissible window.

    The message names the violated inequality, e.g. ``"q(2n-1)<2nr"``.
    """

    def __init__(self, inequality, detail=""):
        self.inequality = inequality
        msg = f"window violated: {inequality}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class InfeasibleSingularityError(ValueError):
    """Kernel singularity |xi - z|^{-s} with s >= 2n is not integrable."""


class OutOfDomainError(ValueError):
    """A target point is not strictly inside the domain."""


class DegeneracyError(ValueError):
    """A matrix that must be inverted is singular (e.g. a weight Hessian)."""


class PshError(ValueError):
    """A weight fails its (strict) plurisubharmonicity requirement."""


class DegenerateFamilyError(ValueError):
    """A test-function family produced no admissible candidate."""


class ResolutionError(RuntimeError):
    """A computed solution misses its tolerance at the given resolution."""

    def __init__(self, msg, suggested_resolution=None):
        self.suggested_resolution = suggested_resolution
        super().__init__(msg)


class DomainMembershipError(ValueError):
    """A form violates the boundary condition defining dom(T*)."""
