class ProtocolError(Exception):
    """A protocol-level rejection; ``reason`` is the short label used in reports."""

    reason = "protocol-error"


class LoginFailure(ProtocolError):
    reason = "login-failure"


class TimeoutAbort(ProtocolError):
    reason = "timeout-abort"


class UnknownParty(ProtocolError):
    reason = "unknown-party"


class ReaderAuthFailure(ProtocolError):
    reason = "reader-auth-failure"


class TagAuthFailure(ProtocolError):
    reason = "tag-auth-failure"


class NoPendingSession(ProtocolError):
    reason = "no-pending-session"


class MessageDropped(ProtocolError):
    reason = "message-dropped"


class FormatError(ValueError):
    """Wire or transcript data that this build cannot decode."""
