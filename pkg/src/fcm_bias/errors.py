"""Exception types shared across the package."""


class FcmBiasError(Exception):
    """Base class for all package errors."""


# --- ingest ---------------------------------------------------------------

class SchemaError(FcmBiasError):
    """Schema file or schema object violates its invariants."""


class MissingColumn(FcmBiasError):
    """A schema feature has no matching column in the CSV header."""


class TypeMismatch(FcmBiasError):
    """A cell cannot be interpreted under the declared feature kind."""


class EmptyDataset(FcmBiasError):
    """No data rows remain after parsing and row filtering."""


class NonExhaustivePredicate(FcmBiasError):
    """An observed value matches no group of an expansion."""


class OverlappingPredicate(FcmBiasError):
    """An observed value matches more than one group of an expansion."""


# --- correlation ----------------------------------------------------------

class ConstantColumn(FcmBiasError):
    """Pearson correlation is undefined for a constant column."""


class SingleCategory(FcmBiasError):
    """Association is undefined with fewer than two observed categories."""


class ConstantNumeric(FcmBiasError):
    """Variance ratio is undefined for a constant numeric column."""


# --- reasoning ------------------------------------------------------------

class DimensionMismatch(FcmBiasError):
    """Vector/matrix shapes are inconsistent."""


class PhiIsOne(FcmBiasError):
    """Initial-stimulus recovery is undefined at phi = 1."""


# --- scenarios ------------------------------------------------------------

class ProtectedActivation(FcmBiasError):
    """A scenario or request tries to activate a protected concept."""


class UnknownConcept(FcmBiasError):
    """A concept name does not exist in the model."""
