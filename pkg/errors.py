#!/usr/bin/env python3
"""
Errors Module
Exception types raised by the lattice toolkit.

Validation-style operations (check_integral and the *_check / verify_* reports)
never raise for mathematical failures; they return FAIL rows instead.
"""


class LatticeToolkitError(Exception):
    """Base class for every error raised by the toolkit."""


class DescriptorError(LatticeToolkitError, ValueError):
    """A lattice descriptor is malformed or carries unknown keys."""


class NonIntegralGram(LatticeToolkitError, ValueError):
    """An explicit Gram matrix is not square, not integer, or not symmetric."""


class NotPositiveDefinite(LatticeToolkitError, ValueError):
    """A leading principal minor of the Gram matrix is not positive."""

    def __init__(self, message, minor_index=None, minor_value=None):
        super().__init__(message)
        self.minor_index = minor_index
        self.minor_value = minor_value


class UnsupportedFamilyRank(LatticeToolkitError, ValueError):
    """A named family was requested at a rank it does not exist in."""


class MethodMismatch(LatticeToolkitError, ValueError):
    """A counting method was requested for a lattice it cannot handle."""


class RankTooSmall(LatticeToolkitError, ValueError):
    """A bound or claim was requested below the rank it is proved for."""


class EvenArgument(LatticeToolkitError, ValueError):
    """The four-square formula was called with an even argument."""


class ResourceLimitExceeded(LatticeToolkitError):
    """Enumeration hit its node ceiling; the instance is beyond desk scale."""

    def __init__(self, message, nodes=None, limit=None):
        super().__init__(message)
        self.nodes = nodes
        self.limit = limit


class InsufficientTruncation(LatticeToolkitError, ValueError):
    """A census does not reach the norm needed by the caller."""


class TailNotCertifiable(LatticeToolkitError):
    """The geometric ratio certificate for a theta tail was not reached."""


class SizeExceedsClassification(LatticeToolkitError):
    """A root-system component is larger than the classification allows.

    Impossible for a verified-integral lattice, so it points at a bug.
    """
