"""Exception types shared across the toolkit."""


class RatingKitError(Exception):
    """Base class for all toolkit errors."""


# --- rating scales ---

class UnknownGrade(RatingKitError):
    def __init__(self, agency, symbol):
        self.agency = agency
        self.symbol = symbol
        super().__init__(f"unknown {agency} grade: {symbol!r}")


class CodeOutOfRange(RatingKitError):
    def __init__(self, code, kind):
        self.code = code
        self.kind = kind
        super().__init__(f"code {code} out of range for scale {kind}")


# --- data model ---

class FileUnreadable(RatingKitError):
    pass


class HeaderMismatch(RatingKitError):
    pass


class RowParseError(RatingKitError):
    def __init__(self, row, message):
        self.row = row
        super().__init__(f"row {row}: {message}")


class MissingField(RatingKitError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"missing raw field: {name}")


class DivisionByZero(RatingKitError):
    def __init__(self, indicator):
        self.indicator = indicator
        super().__init__(f"zero denominator computing indicator: {indicator}")


class LengthMismatch(RatingKitError):
    pass


class ZeroMarketVariance(RatingKitError):
    pass


class EmptyAfterDeletion(RatingKitError):
    pass


class UnknownRegressor(RatingKitError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown regressor: {name!r}")


class InsufficientData(RatingKitError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"fewer than 2 complete rows for column: {column}")


# --- estimation ---

class DimensionMismatch(RatingKitError):
    pass


class EmptyCategory(RatingKitError):
    def __init__(self, category):
        self.category = category
        super().__init__(f"response category {category} has no observations")


class NotConverged(RatingKitError):
    def __init__(self, iterations, gradient_norm):
        self.iterations = iterations
        self.gradient_norm = gradient_norm
        super().__init__(
            f"optimizer did not converge after {iterations} iterations "
            f"(max |gradient| = {gradient_norm:.3e})"
        )


class SingularHessian(RatingKitError):
    pass


# --- evaluation / comparison ---

class EmptyInput(RatingKitError):
    pass


# --- synthetic generation ---

class NonPSDCorrelation(RatingKitError):
    pass


# --- model specs / CLI ---

class SpecParseError(RatingKitError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class UnknownSource(RatingKitError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown regressor source: {name!r}")


class UnknownTransform(RatingKitError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown transform: {name!r}")
