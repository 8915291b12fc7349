"""Exception types shared across the package."""

from __future__ import annotations


class QhredError(Exception):
    """Base class for all package errors."""


class ZeroDenominator(QhredError, ZeroDivisionError):
    pass


class PoleAtPoint(QhredError, ZeroDivisionError):
    pass


class InconsistentRadical(QhredError, ValueError):
    pass


class RadicandZero(QhredError, ValueError):
    pass


class ParseError(QhredError, ValueError):
    pass


class ParityMismatch(QhredError, ValueError):
    pass


class UndefinedBracket(QhredError, KeyError):
    pass


class DegenerateParameter(QhredError, ValueError):
    pass


class CriticalLevel(QhredError, ValueError):
    pass


class NotDiagonalizable(QhredError, ValueError):
    pass


class SingularGram(QhredError, ValueError):
    pass


class NotInCentralizer(QhredError, ValueError):
    pass


class NoSolution(QhredError, ValueError):
    pass


class AmbiguousSolution(QhredError, ValueError):
    def __init__(self, message: str, dimension: int):
        super().__init__(message)
        self.dimension = dimension


class PoleAtC(QhredError, ValueError):
    pass


class ConsistencyError(QhredError, ValueError):
    pass


class ConfigError(QhredError, ValueError):
    pass
