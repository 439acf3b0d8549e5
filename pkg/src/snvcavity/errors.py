"""Exception taxonomy shared across the package.

CLI exit-code mapping: ``DataFormatError`` (and plain I/O problems) are
usage/input errors (exit 2); every other ``SnvCavityError`` is an analysis
failure (exit 1).
"""


class SnvCavityError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SnvCavityError, ValueError):
    """An argument is outside the physically or mathematically valid range."""


class DegenerateBranchingError(DomainError):
    """Branching ratio at 0 or 1 makes a transition's rate budget vanish."""


class DegenerateDipoleError(DomainError):
    """Dipole-angle ratio is unbounded (fully suppressed reference transition)."""


class DataFormatError(SnvCavityError, ValueError):
    """A data file or configuration file could not be parsed as specified."""


class FitError(SnvCavityError):
    """Base class for curve-fitting failures."""


class SingularFitError(FitError):
    """Normal equations stayed singular even under heavy damping."""


class UnderResolvedError(FitError):
    """Fitted feature is narrower than the sampling can support."""


class InsufficientDataError(FitError):
    """Too few data points for the requested fit."""


class DegenerateModelError(FitError):
    """Model parameter is unidentifiable from the data (e.g. flat input)."""


class NoIntersectionError(SnvCavityError):
    """The two offset-angle curves do not cross inside the search bracket."""


class DegenerateCurvesError(SnvCavityError):
    """Offset-angle curves coincide everywhere; the crossing is undefined."""


class UnreliableRatioError(SnvCavityError):
    """Reference amplitude is at or below the noise floor; ratio meaningless."""
