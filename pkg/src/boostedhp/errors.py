"""Exception hierarchy shared by all filters and pipelines."""


class FilterError(Exception):
    """Base class for every error raised by this package."""


class InvalidLengthError(FilterError, ValueError):
    pass


class DataError(FilterError, ValueError):
    pass


class DimensionError(FilterError, ValueError):
    pass


class ParameterError(FilterError, ValueError):
    pass


class NumericalError(FilterError, ArithmeticError):
    pass


class DegenerateInputError(FilterError, ValueError):
    """Input carries no cyclical variation (e.g. an exactly affine series)."""


class SingularDesignError(FilterError, ValueError):
    pass


class SampleSizeError(FilterError, ValueError):
    pass


class SpecError(FilterError, ValueError):
    pass


class WindowError(FilterError, ValueError):
    pass


class FormatError(FilterError, ValueError):
    """Unparseable input file. Message carries row/column diagnostics."""
