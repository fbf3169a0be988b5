"""Exception hierarchy.

Every error raised by the package derives from :class:`MilneError`, so
callers can catch one type at the boundary (the CLI does exactly that).
"""


class MilneError(Exception):
    """Base class for all package errors."""


# special functions
class SpecFunError(MilneError):
    pass


class PoleError(SpecFunError):
    pass


class NonConvergence(SpecFunError):
    pass


class AsymptoticAccuracyLoss(SpecFunError):
    pass


class ConnectionFormulaPole(SpecFunError):
    pass


# integration
class IntegrationFailure(MilneError):
    pass


class StepUnderflow(IntegrationFailure):
    pass


class DomainError(MilneError):
    pass


class NonPositiveAmplitude(IntegrationFailure):
    pass


class ZeroEnergy(MilneError):
    pass


# Milne core
class ZeroWronskian(MilneError):
    pass


class AmplitudeVanishes(MilneError):
    pass


class ImaginaryPartTooLarge(MilneError):
    pass


class QuadratureFailure(MilneError):
    pass


class NoAllowedRegion(MilneError):
    pass


class GridTooCoarse(MilneError):
    pass


class PhaseUnwrapFailure(MilneError):
    pass


# models
class ParameterOutOfRange(MilneError, ValueError):
    pass


class ComplexBranch(ParameterOutOfRange):
    pass


class DegenerateDenominator(ParameterOutOfRange):
    pass


class NoClosedForm(MilneError):
    pass


class LevelOutOfRange(MilneError):
    pass


class BranchPoint(MilneError):
    pass


class AsymmetricGrid(MilneError, ValueError):
    pass


class ZeroCrossing(MilneError):
    pass


# root finding
class InvalidBracket(MilneError):
    pass


class MaxIterations(MilneError):
    pass


class BracketNotFound(MilneError):
    def __init__(self, n, message=None):
        self.n = n
        super().__init__(message or f"no bracket found for level n={n}")
