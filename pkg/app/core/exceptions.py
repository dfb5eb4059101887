# app/core/exceptions.py

from typing import Optional, Sequence


# ============================================================
# ✅ BASE ERROR
# ============================================================
class CertifyError(Exception):
    """An error carrying a user-facing detail and a process exit code."""

    exit_code: int = 1

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


# ============================================================
# ✅ INPUT ERRORS
# ============================================================
class NetworkSyntaxError(CertifyError):
    exit_code = 2

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class NetworkValidationError(CertifyError):
    exit_code = 2


class CertificateFormatError(CertifyError):
    exit_code = 2


# ============================================================
# ✅ PRECONDITION AND INTERNAL ERRORS
# ============================================================
class DimensionMismatch(CertifyError):
    pass


class RankDeficientError(CertifyError):
    pass


class FactorizationError(CertifyError):
    pass


class OrderError(CertifyError):
    pass


class InvariantViolation(CertifyError):
    pass


class PersistenceError(CertifyError):
    pass


class IntegrationError(CertifyError):
    """Step size underflow; keeps the time and state where it happened."""

    def __init__(self, detail: str, time: float, state: Sequence[float]):
        super().__init__(f"{detail} at t={time:.6g}")
        self.time = time
        self.state = list(state)
