import logging
import sys

import structlog

from qhflow.config import Settings, get_settings

PRE_CHAIN: list[structlog.typing.Processor] = [
    structlog.contextvars.merge_contextvars,
    structlog.processors.add_log_level,
    structlog.processors.TimeStamper(fmt="iso"),
]


def _renderers(log_format: str) -> list[structlog.typing.Processor]:
    if log_format == "json":
        return [structlog.processors.format_exc_info, structlog.processors.JSONRenderer()]
    return [structlog.dev.ConsoleRenderer(colors=False)]


def configure_logging(settings: Settings | None = None) -> None:
    """Send structlog events and stdlib records (matplotlib, scipy) to stderr.

    stdout is reserved for reports and SVG documents.
    """
    settings = settings or get_settings()
    level = logging.getLevelName(settings.log_level.upper())
    renderers = _renderers(settings.log_format)

    structlog.configure(
        processors=PRE_CHAIN + renderers,
        wrapper_class=structlog.make_filtering_bound_logger(level),
        context_class=dict,
        logger_factory=structlog.WriteLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(
        structlog.stdlib.ProcessorFormatter(
            foreign_pre_chain=PRE_CHAIN,
            processors=[structlog.stdlib.ProcessorFormatter.remove_processors_meta, *renderers],
        )
    )
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(level)

    # font discovery at DEBUG
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
