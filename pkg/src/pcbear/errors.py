"""Exception and warning types raised across the pipeline."""


class PcbearError(Exception):
    """Base class for all errors raised by this package."""


class MissingFileError(PcbearError):
    """A file referenced by a manifest or CLI argument does not exist."""


class ShapeMismatchError(PcbearError):
    """Stored or passed tensor dimensions disagree with declared ones."""


class CorruptTensorError(PcbearError):
    """A tensor contains NaN/Inf entries or otherwise invalid values."""


class UnknownLabelError(PcbearError):
    """A video's label index falls outside [0, num_classes)."""


class IoFailureError(PcbearError):
    """Reading or writing a bundle failed at the filesystem level."""


class BadConfigError(PcbearError):
    """A configuration value violates its documented constraints."""


class DegeneratePoseError(PcbearError):
    """Pose normalization scale collapsed below the minimum with clamping disabled."""


class WindowTooLongError(PcbearError):
    """Requested window length exceeds the sequence length."""


class TooFewWindowsError(PcbearError):
    """Clustering needs at least two samples."""


class NoSuchPartitionError(PcbearError):
    """No partition in the hierarchy satisfies the selection policy."""


class LengthMismatchError(PcbearError):
    """Two parallel sequences have different lengths."""


class MissingClassError(PcbearError):
    """A class index in [0, k) has no training samples."""


class NonFiniteError(PcbearError):
    """Training produced or received non-finite values."""


class BadClassError(PcbearError):
    """Class index out of range for the trained classifier."""


class BadConceptIdError(PcbearError):
    """Concept index out of range for the trained concept layer."""


class EmptyClassError(PcbearError):
    """Requested class has no samples in the chosen split."""


class EmptySplitError(PcbearError):
    """The requested split contains no videos."""


class DegenerateConceptWarning(UserWarning):
    """A concept column is constant over the training set; its std was clamped."""
