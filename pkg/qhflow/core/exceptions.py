import structlog

logger = structlog.get_logger()


class QHFlowError(Exception):
    """Base exception for every failure the command line reports."""

    exit_code = 2
    event = "invalid_input"


class InvalidInputError(QHFlowError):
    """Malformed document, wrong degrees, or an out-of-range argument."""


class NotStableError(QHFlowError):
    """Field is not structurally stable where stability is required."""

    exit_code = 3
    event = "field_not_stable"


class DegenerateRadialError(QHFlowError):
    """Field is the radial field (px, qy) up to scale."""

    exit_code = 4
    event = "degenerate_radial"


class EmptyClassError(QHFlowError):
    """No stable field exists for the weight triple."""

    exit_code = 5
    event = "stable_class_empty"


class NotAdmissibleError(QHFlowError):
    """Sign sequence is not realized by any stable field."""

    exit_code = 6
    event = "sequence_not_admissible"


class NotApplicableError(QHFlowError):
    """Dominant part does not meet the local equivalence hypothesis."""

    exit_code = 7
    event = "theorem_not_applicable"


def handle_command_error(exc: Exception) -> int:
    """Log a command failure and map it onto the exit-code contract."""
    if isinstance(exc, QHFlowError):
        logger.warning(exc.event, error=str(exc), error_type=type(exc).__name__)
        return exc.exit_code
    if isinstance(exc, OSError):
        logger.error("io_error", error=str(exc), filename=getattr(exc, "filename", None))
        return InvalidInputError.exit_code
    raise exc
