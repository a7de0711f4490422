"""Exception hierarchy shared by every module.

Each class carries the process exit code the CLI maps it to: domain
errors exit 1, precision/truncation errors exit 2.
"""


class TowerError(Exception):
    exit_code = 1


class InvalidParameter(TowerError, ValueError):
    pass


class InvalidInput(InvalidParameter):
    pass


class OutOfDomain(TowerError, ValueError):
    pass


class FormulaNotApplicable(OutOfDomain):
    pass


class UnsupportedRamified(OutOfDomain):
    pass


class RingTooSmall(TowerError):
    pass


class InsufficientLevel(TowerError):
    pass


class DivergentSubstitution(TowerError, ValueError):
    pass


class OrbitInconsistency(TowerError):
    pass


class PrecisionError(TowerError, ArithmeticError):
    exit_code = 2


class InsufficientPrecision(PrecisionError):
    pass


class InsufficientTruncation(PrecisionError):
    pass


class InsufficientCoefficients(PrecisionError):
    pass


class PrecisionUnreachable(PrecisionError):
    pass


class MissingFixtures(TowerError):
    exit_code = 2
