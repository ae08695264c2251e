"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
2 for bad configuration or parameters, 3 for bad data, 4 for numerical or
recovery failures.
"""


class ArxgenError(Exception):
    exit_code = 1

    @property
    def code(self):
        return type(self).__name__


class ConfigError(ArxgenError):
    exit_code = 2


class DataError(ArxgenError):
    exit_code = 3


class NumericalError(ArxgenError):
    exit_code = 4


# parameters / configuration
class NonPositiveParameter(ConfigError):
    pass


class NotUnderdamped(ConfigError):
    pass


class DampingNotSupported(ConfigError):
    pass


class FoldedSampling(ConfigError):
    pass


# data
class SamplingMismatch(DataError):
    pass


class TooFewSamples(DataError):
    pass


class LengthMismatch(DataError):
    pass


class MissingColumn(DataError):
    pass


class MalformedRow(DataError):
    pass


class NonMonotoneTime(DataError):
    pass


class IrregularSampling(DataError):
    pass


class WindowTooShort(DataError):
    pass


class NoEventFound(DataError):
    pass


# numerics / recovery
class RankDeficient(NumericalError):
    pass


class BranchViolation(NumericalError):
    pass


class NonPhysical(NumericalError):
    pass


class DegenerateCoefficients(NumericalError):
    pass


class SingularRecovery(NumericalError):
    pass
