"""Exception types shared across the toolkit."""


class ConjlabError(Exception):
    """Base class for all toolkit errors."""


class WordSyntaxError(ConjlabError, ValueError):
    """Malformed word text or letter sequence."""


class RankMismatchError(ConjlabError, ValueError):
    """Operands live in free groups of different rank."""


class SizeCapError(ConjlabError):
    """An enumeration would exceed its configured cap."""

    def __init__(self, message, cap):
        super().__init__(message)
        self.cap = cap


class GroupAxiomError(ConjlabError, ValueError):
    """A multiplication table violates a group axiom (witness in message)."""


class InvalidCharacterError(ConjlabError, ValueError):
    """Character data violates its constraints (non-class function, bad radicand)."""


class InvalidNormError(ConjlabError, ValueError):
    """A claimed norm is not a semimetric norm (e.g. zero set not a normal subgroup)."""


class UndefinedMarginError(ConjlabError):
    """Margin requested for a map with no non-identity labels."""


class SeparationGapError(ConjlabError):
    """Measured margin does not dominate the accumulated defect bound."""


class SeparationPreconditionError(ConjlabError):
    """A homomorphism fails the required separation; carries an offending word."""

    def __init__(self, message, word=None):
        super().__init__(message)
        self.word = word


class CertificateRefusedError(ConjlabError):
    """Membership actually holds, so no non-membership certificate exists."""


class CertificateSyntaxError(ConjlabError, ValueError):
    """Malformed certificate text."""
