"""Exceptions shared by the verification code and the command line."""
from __future__ import annotations


class VerificationFailure(AssertionError):
    """An identity that should hold exactly did not.

    ``lhs`` and ``rhs`` are JSON-ready records of the two sides.
    """

    def __init__(self, identity: str, lhs=None, rhs=None, context=None):
        super().__init__(identity)
        self.identity = identity
        self.lhs = lhs
        self.rhs = rhs
        self.context = context or {}

    def to_record(self) -> dict:
        return {"identity": self.identity, "lhs": self.lhs, "rhs": self.rhs,
                "context": self.context}


class PreconditionError(ValueError):
    """Inputs outside the range where an operation is defined."""
