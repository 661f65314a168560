"""Error types shared by all modules.

Each error carries a short machine-readable ``category`` string and a
distinct process exit code; the command-line front end maps uncaught
toolkit errors onto ``error:<category>: <message>`` plus that code.
"""


class ToolkitError(Exception):
    """Base class for every error raised by this package."""

    category = "internal"
    exit_code = 70


class FormatError(ToolkitError):
    """Input file is not a RIFF/WAVE container (bad or garbled magic)."""

    category = "format"
    exit_code = 3


class UnsupportedFormatError(ToolkitError):
    """WAV file uses a codec, bit depth or channel layout we reject."""

    category = "unsupported-format"
    exit_code = 4


class TruncationError(ToolkitError):
    """Data chunk declares more bytes than the file contains."""

    category = "truncated"
    exit_code = 5


class AudioIOError(ToolkitError):
    """Filesystem-level read/write failure."""

    category = "io"
    exit_code = 6


class UnsupportedBasisError(ToolkitError):
    """Requested wavelet basis is not one of haar, db1..db4."""

    category = "unsupported-basis"
    exit_code = 7


class DepthError(ToolkitError):
    """Signal too short for the requested decomposition depth."""

    category = "depth"
    exit_code = 8


class InconsistentDecompositionError(ToolkitError):
    """Coefficient vector lengths do not chain to the original length."""

    category = "inconsistent-decomposition"
    exit_code = 9


class DegenerateKeyError(ToolkitError):
    """All-zero LFSR seed; the register would emit zeros forever."""

    category = "degenerate-key"
    exit_code = 10


class EmptyVoicedError(ToolkitError):
    """Silence removal consumed the entire signal."""

    category = "empty-voiced"
    exit_code = 11


class InconsistentMapError(ToolkitError):
    """Silence map does not reassemble to the recorded original length."""

    category = "inconsistent-map"
    exit_code = 12


class SegmentTooShortError(ToolkitError):
    """Coefficient vector too short to host or read a watermark bit."""

    category = "segment-too-short"
    exit_code = 13


class CapacityError(ToolkitError):
    """Voiced signal cannot carry the requested number of bits."""

    category = "capacity"
    exit_code = 14


class UnsupportedRatioError(ToolkitError):
    """Resampling ratio does not reduce to small integer factors."""

    category = "unsupported-ratio"
    exit_code = 15


class ParameterError(ToolkitError):
    """Argument outside its documented domain."""

    category = "parameter"
    exit_code = 16


class ExternalToolError(ToolkitError):
    """Configured external encoder is missing or failed."""

    category = "external-tool"
    exit_code = 17


class UndefinedRatioError(ToolkitError):
    """Energy ratio undefined (all-zero denominator signal)."""

    category = "undefined-ratio"
    exit_code = 18


class AlignmentError(ToolkitError):
    """Compared sequences or signals have incompatible lengths/rates."""

    category = "alignment"
    exit_code = 19
