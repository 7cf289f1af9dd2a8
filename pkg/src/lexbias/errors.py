"""Exception hierarchy shared by every analysis module."""


class LexbiasError(Exception):
    """Base class for all errors raised by lexbias."""


class CorpusDecodeError(LexbiasError, UnicodeError):
    def __init__(self, path, lineno, reason):
        self.path = path
        self.lineno = lineno
        self.reason = reason
        where = f"{path}:" if path else "line "
        super().__init__(f"{where}{lineno}: invalid UTF-8 ({reason})")


class EmptyCorpusError(LexbiasError, ValueError):
    pass


class SplitSizeError(LexbiasError, ValueError):
    def __init__(self, requested, available):
        self.requested = requested
        self.available = available
        super().__init__(
            f"requested {requested} sentence pairs but only {available} "
            f"non-empty aligned pairs are available"
        )


class UndefinedMetricError(LexbiasError, ArithmeticError):
    """A metric has no finite value on this input (e.g. Yule's I with K = 0).

    ``reason`` is a short machine-readable code that reports carry in place
    of the missing value.
    """

    def __init__(self, metric, reason, message=None):
        self.metric = metric
        self.reason = reason
        super().__init__(message or f"{metric} is undefined: {reason}")


class DegenerateBootstrapError(LexbiasError, RuntimeError):
    pass


class VariantFileError(LexbiasError, ValueError):
    def __init__(self, path, message, lineno=None, colno=None):
        self.path = path
        self.lineno = lineno
        self.colno = colno
        loc = f"{path}"
        if lineno is not None:
            loc += f":{lineno}:{colno}"
        super().__init__(f"{loc}: {message}")
