"""Exception types shared across the package."""


class WeightlabError(Exception):
    """Base class for all package-specific errors."""


class NonIntegrableCell(WeightlabError):
    """A cell average diverges while sampling a closed-form function."""

    def __init__(self, cell_index, cell_left, cell_right, point):
        self.cell_index = cell_index
        self.cell_left = cell_left
        self.cell_right = cell_right
        self.point = point
        super().__init__(
            f"cell {cell_index} = [{cell_left:g}, {cell_right:g}] has a "
            f"divergent average (singularity at x = {point:g})"
        )


class DepthMismatch(WeightlabError):
    """Two grid functions do not share a domain and depth."""


class NonPositiveWeight(WeightlabError):
    """A weight must be strictly positive on every cell."""


class DeltaOutOfRange(WeightlabError):
    """Coifman-Rochberg exponent must lie in (0, 1)."""


class NotInLp(WeightlabError):
    """A membership precondition (finite L^p plateau) failed."""


class TailNotSmall(WeightlabError):
    """The Rubio de Francia tail did not fall below tolerance by k_max."""


class BTooSmall(WeightlabError):
    """An observed ratio ||Mg||/||g|| exceeded the norm bound B in use."""


class RHFailed(WeightlabError):
    """No reverse Holder exponent available for the requested pipeline."""


class NoExponentFound(WeightlabError):
    """The exponent ladder search failed even at its bottom rung."""


class ChainBroken(WeightlabError):
    """A cell-wise inequality chain was violated beyond float tolerance."""


class SzegoFailed(WeightlabError):
    """The Szego log-integrability gate rejected a circle weight."""


class NonPositiveSample(WeightlabError):
    """Circle weights must be positive at every sample."""


class UnknownScenario(WeightlabError):
    """CLI scenario name not recognised."""


class CheckFailed(WeightlabError):
    """A scenario check failed; carries the failing check id."""

    def __init__(self, check_id, detail=""):
        self.check_id = check_id
        super().__init__(f"check '{check_id}' failed{': ' + detail if detail else ''}")
