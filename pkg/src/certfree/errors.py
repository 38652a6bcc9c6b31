"""Exception taxonomy.

Every error carries a stable machine-readable ``code`` and the process exit
status the CLI uses for it.  Decryption failure and signature rejection are
*not* errors: ``decrypt`` returns ``None`` and ``verify`` returns ``False``.
"""


class CertFreeError(Exception):
    code = "error"
    exit_code = 1


class FormatError(CertFreeError):
    """Input has the wrong length, is truncated or has trailing bytes."""

    code = "format"
    exit_code = 10


class ValidationError(CertFreeError):
    """Input is well-sized but is not a group element / canonical scalar."""

    code = "invalid-element"
    exit_code = 11


class MagicError(FormatError):
    code = "bad-magic"
    exit_code = 12


class VersionError(FormatError):
    code = "bad-version"
    exit_code = 13


class KindError(FormatError):
    code = "bad-kind"
    exit_code = 14


class DigestMismatch(CertFreeError):
    """Container was produced under different system parameters."""

    code = "params-mismatch"
    exit_code = 15


class ParameterError(CertFreeError):
    code = "bad-params"
    exit_code = 6


class EntropyError(CertFreeError):
    code = "entropy"
    exit_code = 16


class BindingCheckError(CertFreeError):
    """Partial key does not bind to the user's commitment U."""

    code = "binding-check-failed"
    exit_code = 3


class KeyReuseError(CertFreeError):
    code = "ephemeral-reused"
    exit_code = 17
