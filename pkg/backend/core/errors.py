#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""Exception hierarchy shared by the toolkit.

Library code raises these; report builders (verification suites, equivalence
reports) catch the documented ones and turn them into skipped or
indeterminate entries instead of failures.
"""


class KreinToolkitError(Exception):
    """Base class of every error raised by the toolkit."""


class ArgumentError(KreinToolkitError):
    """Raised when an argument has an invalid value."""


class DimensionMismatchError(ArgumentError):
    """Raised when ambient dimensions, splits or spaces do not fit together."""


class SingularFormError(KreinToolkitError):
    """Raised when a matrix that must be invertible is singular at tolerance."""


class InvalidSpaceError(KreinToolkitError):
    """Raised when a fundamental symmetry is not a Hermitian involution."""


class NotSymmetricError(KreinToolkitError):
    """Raised when a symmetric relation is required but not given."""


class NotIsometricError(KreinToolkitError):
    """Raised when a boundary pair violates the Green identity or its domain clauses."""


class PreconditionError(KreinToolkitError):
    """Raised when an operation's precondition fails (e.g. a point of the point spectrum)."""


class NotContractionError(ArgumentError):
    """Raised when a quasi-selfadjoint contraction has norm above one."""


class SubspaceTooSmallError(ArgumentError):
    """Raised when the boundary subspace N misses part of ran(T* - T)."""


class NotDBoundaryError(KreinToolkitError):
    """Raised when Gamma^A differs from E Gamma^B."""


class GramMismatchError(KreinToolkitError):
    """Raised when Weyl-derived Gram data of two triples disagree."""


class RankDeficientError(KreinToolkitError):
    """Raised when the gamma-field vectors over a grid do not span the space."""


class InstanceFormatError(KreinToolkitError):
    """Raised when an instance file cannot be parsed into valid objects."""
