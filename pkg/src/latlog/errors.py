"""Exception types shared across the workbench.

Every error carries a stable ``code`` the CLI uses to classify failures and a
``details`` mapping with machine-readable payload (witness tuples, positions,
budget counters).
"""
from __future__ import annotations


class LatlogError(Exception):
    code = "ERROR"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details


class ParseError(LatlogError):
    code = "PARSE_ERROR"


class UnknownSymbolError(LatlogError):
    code = "UNKNOWN_SYMBOL"


class ArityMismatchError(LatlogError):
    code = "ARITY_MISMATCH"


class BadPathError(LatlogError):
    code = "BAD_PATH"


class LatticeAxiomViolation(LatlogError):
    code = "LATTICE_AXIOM_VIOLATION"


class PolarityViolation(LatlogError):
    code = "POLARITY_VIOLATION"


class ImplicationLawViolation(LatlogError):
    code = "IMPLICATION_LAW_VIOLATION"


class MissingMandatoryConnective(LatlogError):
    code = "MISSING_MANDATORY_CONNECTIVE"


class FrameViolation(LatlogError):
    code = "FRAME_VIOLATION"


class UndeclaredConstant(LatlogError):
    code = "UNDECLARED_CONSTANT"


class UnboundVariable(LatlogError):
    code = "UNBOUND_VARIABLE"


class BudgetExceeded(LatlogError):
    code = "BUDGET_EXCEEDED"


class NotValidError(LatlogError):
    code = "NOT_VALID"


class PreconditionFailed(LatlogError):
    code = "PRECONDITION_FAILED"


class StrongQuantifierPresent(LatlogError):
    code = "STRONG_QUANTIFIER_PRESENT"


class UninterpretedSymbol(LatlogError):
    code = "UNINTERPRETED_SYMBOL"


class SymbolInBoth(LatlogError):
    code = "SYMBOL_IN_BOTH"


class SmokeTestFailed(LatlogError):
    code = "SMOKE_TEST_FAILED"


class PropInterpolationFailed(LatlogError):
    code = "PROP_INTERPOLATION_FAILED"

    def __init__(self, message: str, verdict=None, trace=None, **details):
        super().__init__(message, **details)
        self.verdict = verdict
        self.trace = trace


class UnknownValidity(LatlogError):
    code = "UNKNOWN_VALIDITY"

    def __init__(self, message: str, trace=None, **details):
        super().__init__(message, **details)
        self.trace = trace
