"""
Exception hierarchy shared by every cy3lab module
"""


class Cy3LabError(Exception):
    """Base class for all failures raised by the lab."""


class CatalogError(Cy3LabError):
    """Malformed catalog line or invalid catalog document."""

    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class GroupError(Cy3LabError):
    """Group generation produced something that is not an essential group."""


class NormalizerError(Cy3LabError):
    """Normalizer enumeration or descent check failed."""


class CohomologyError(Cy3LabError):
    """Representation or invariant computation failed."""


class GeometryError(Cy3LabError):
    """Fixed-locus, orbit or fundamental group computation failed."""


class ToricError(Cy3LabError):
    """Toric enumeration or chart verification failed."""


class ModularError(Cy3LabError):
    """Numerical evaluation could not be certified."""


class UsageError(Cy3LabError):
    """Invalid run configuration (unknown label, task not applicable)."""
