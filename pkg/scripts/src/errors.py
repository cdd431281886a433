"""Errors - Exception hierarchy shared by the evaluators, identities and CLI"""


class SpecialFunctionError(Exception):
    """
    Base exception for evaluation errors.

    Stores the failing function name, a short reason and optional details so
    the CLI can print a one-line diagnostic naming the violated condition.
    """

    def __init__(self, function: str, reason: str, details: str = ""):
        self.function = function
        self.reason = reason
        self.details = details
        message = f"{function}: {reason}"
        if details:
            message += f" - {details}"
        super().__init__(message)


class DomainError(SpecialFunctionError, ValueError):
    """Parameter outside the admissible domain"""

    pass


class PoleError(DomainError):
    """A Gamma or Pochhammer pole was met"""

    pass


class NonConvergenceError(SpecialFunctionError):
    """Series budget exhausted before the tail-window test passed"""

    def __init__(self, function: str, reason: str, details: str = "", shells_used: int = 0):
        self.shells_used = shells_used
        super().__init__(function, reason, details)


class BudgetExceededError(SpecialFunctionError):
    """Index set or node count above the configured cap"""

    def __init__(self, function: str, requested: int, cap: int):
        self.requested = requested
        self.cap = cap
        super().__init__(function, "budget exceeded", f"{requested} > cap {cap}")


class IdentitySkipped(Exception):
    """Identity is outside the regime the quadrature can certify"""

    def __init__(self, identity_id: str, reason: str):
        self.identity_id = identity_id
        self.reason = reason
        super().__init__(f"{identity_id} skipped: {reason}")


class SuiteConfigError(ValueError):
    """Raised when a suite file or parameter block fails validation."""
