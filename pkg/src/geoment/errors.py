"""Exception types shared across the package."""


class DegenerateUpdate(Exception):
    """A factor update collapsed to the zero vector.

    Happens when the state is orthogonal to the partial product of the
    remaining factors. Carries the offending mode index when known.
    """

    def __init__(self, message: str, mode: int | None = None):
        super().__init__(message)
        self.mode = mode


class MitigationOverflow(Exception):
    """The mitigation denominator is not positive (p too close to 1)."""


class NegativeRate(Exception):
    """Noise-rate calibration would yield p < 0 (measured below reference)."""
