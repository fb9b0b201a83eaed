"""Exception types shared across the package."""


class TunnelError(Exception):
    """Base class for construction and certification failures."""


class ConfigError(TunnelError):
    """Invalid configuration value or unknown key."""


class NonpositiveRadius(TunnelError):
    """The profile curve reached or crossed the rotation axis."""


class StepTooLarge(TunnelError):
    """Sampling step exceeds the curve length."""


class OutOfRange(TunnelError):
    """Lookup parameter outside the sampled range."""


class NoPositiveStart(TunnelError):
    """The curvature lower bound fails already at the start of the initial arc."""


class AxisCrossed(TunnelError):
    """Internal error: the bend recursion produced a nonpositive radius."""


class ThetaBarTooSmall(TunnelError):
    """sin(theta_bar) <= 4/5, so the final-arc curvature window is empty."""


class EtaTooLarge(TunnelError):
    """A smoothing transition does not fit inside its adjacent segments."""


class NormalizationFailed(TunnelError):
    """The tail cannot supply the turn lost to smoothing transitions."""


class BlendNotPositive(TunnelError):
    """Scalar curvature of the end blend dips to zero or below."""

    def __init__(self, message, min_kappa=None):
        super().__init__(message)
        self.min_kappa = min_kappa


class RadiusMismatch(TunnelError):
    """The two necks end at different cylinder radii."""


class LTooSmall(TunnelError):
    """Requested collar distance is below the length of the bare tunnel."""


class InsufficientGrid(TunnelError):
    """A scaling fit needs at least two grid points."""
