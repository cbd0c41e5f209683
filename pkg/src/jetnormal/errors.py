"""Exception and warning types raised across the package."""


class JetNormalError(Exception):
    """Base class for all package errors."""


class EmptyCloud(JetNormalError, ValueError):
    pass


class InvalidNeighborhood(JetNormalError, ValueError):
    pass


class RankDeficient(JetNormalError, ValueError):
    """The weighted Vandermonde system has effective rank below the number of coefficients."""


class DegenerateHull(JetNormalError, ValueError):
    """Projected points are collinear, so no disk can be inscribed in their hull."""

    def __init__(self, message, d_max=0.0):
        super().__init__(message)
        self.d_max = d_max
        self.d_min = 0.0
        self.ratio = float("inf")


class DegeneratePatch(JetNormalError, ValueError):
    """Patch covariance has rank below 2."""


class DegenerateSum(JetNormalError, ValueError):
    """Rough normal plus residual is (numerically) the zero vector."""


class AntipodalPair(JetNormalError, ValueError):
    pass


class NegativeLoss(JetNormalError, ValueError):
    pass


class ExactFit(JetNormalError):
    """Every recorded error sits below the noise floor, so no slope can be fitted.

    The partially filled report is kept on ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SamplingFailure(JetNormalError, RuntimeError):
    pass


class MalformedLine(JetNormalError, ValueError):
    def __init__(self, line_no, detail=""):
        msg = f"malformed line {line_no}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.line_no = line_no


class IllConditioned(UserWarning):
    """Condition estimate of the jet system exceeded the configured cap."""


class NonConvergence(UserWarning):
    pass
