"""Exception hierarchy shared by every module.

Each class carries a short machine-readable ``code`` that the CLI puts in
its error reports.
"""


class FsIdealsError(Exception):
    code = "error"


class InvalidInput(FsIdealsError, ValueError):
    code = "invalid-input"


class ArithmeticOverflow(FsIdealsError, OverflowError):
    code = "arithmetic-overflow"


class EnumerationTooLarge(FsIdealsError):
    code = "enumeration-too-large"


class SearchTooLarge(FsIdealsError):
    code = "search-too-large"


class InsufficientSource(FsIdealsError):
    code = "insufficient-source"


class DomainExceeded(FsIdealsError):
    code = "domain-exceeded"


class InvalidChain(FsIdealsError, ValueError):
    code = "invalid-chain"


class InvalidProbe(FsIdealsError, ValueError):
    code = "invalid-probe"


# errors that mean "the machine ran out of room", not "the input is wrong"
RESOURCE_ERRORS = (ArithmeticOverflow, EnumerationTooLarge, SearchTooLarge,
                   InsufficientSource, DomainExceeded)
