import secrets
import time
from collections.abc import Iterator
from contextlib import contextmanager

import structlog

logger = structlog.get_logger()


class CommandOutcome:
    """Mutable holder so the command body can report its exit code."""

    def __init__(self) -> None:
        self.exit_code = 0


@contextmanager
def command_context(command: str, **fields: object) -> Iterator[CommandOutcome]:
    """Bind command context and log timing around one CLI invocation."""
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(
        command=command,
        run_id=secrets.token_hex(4),
        **fields,
    )

    start_time = time.perf_counter()
    outcome = CommandOutcome()

    logger.info("command_started")

    try:
        yield outcome
        duration_ms = (time.perf_counter() - start_time) * 1000
        logger.info(
            "command_completed",
            exit_code=outcome.exit_code,
            duration_ms=round(duration_ms, 2),
        )
    except Exception as exc:
        duration_ms = (time.perf_counter() - start_time) * 1000
        logger.exception(
            "command_failed",
            duration_ms=round(duration_ms, 2),
            error=str(exc),
        )
        raise
