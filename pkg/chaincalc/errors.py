# chaincalc/errors.py - Exception hierarchy for the chain calculus toolkit
"""
Every failure raised by chaincalc derives from ChainCalcError so callers
(and the CLI) can catch one type. Report-style checks never raise; they
return dictionaries with 'valid', 'errors', 'warnings' and 'stats'.
"""


class ChainCalcError(ValueError):
    """Base class for all chaincalc failures."""

    exit_code = 1


class ChainValidationError(ChainCalcError):
    """A chain, polyline or region violates its structural invariant."""


class RefinementError(ChainCalcError):
    """A descending sequence fails to refine or to meet its diameter bound."""


class InsufficientDepthError(ChainCalcError):
    """The available nest is too shallow for the requested precision."""

    def __init__(self, message: str = "insufficient depth"):
        super().__init__(message)


class BudgetExhaustedError(ChainCalcError):
    """A bounded search ran out of budget before deciding."""

    exit_code = 3

    def __init__(self, message: str = "budget exhausted", exhausted=None):
        super().__init__(message)
        self.exhausted = list(exhausted or [])


class GadgetFitError(ChainCalcError):
    """The construction could not place a gadget inside the chosen rectangle."""

    def __init__(self, message: str = "gadget does not fit"):
        super().__init__(message)


class FormatError(ChainCalcError):
    """A file or command-line value could not be parsed."""

    exit_code = 2


def make_report() -> dict:
    """Empty report in the shape shared by every verification routine."""
    return {
        'valid': True,
        'errors': [],
        'warnings': [],
        'stats': {}
    }


def fail(report: dict, message: str) -> dict:
    """Record an error on a report and mark it invalid."""
    report['errors'].append(message)
    report['valid'] = False
    return report
