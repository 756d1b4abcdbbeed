import sys

import structlog
from pydantic import ValidationError

from qhflow.cli.router import build_parser
from qhflow.config import get_settings
from qhflow.core.exceptions import InvalidInputError, QHFlowError, handle_command_error
from qhflow.core.logging import configure_logging
from qhflow.core.middleware import command_context
from qhflow.dependencies import build_settings

logger = structlog.get_logger()


def main(argv: list[str] | None = None) -> int:
    """Run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(get_settings())
    try:
        settings = build_settings(args)
    except ValidationError as exc:
        logger.warning("invalid_settings", error=str(exc))
        return InvalidInputError.exit_code
    configure_logging(settings)

    with command_context(args.command) as outcome:
        try:
            outcome.exit_code = args.handler(args, settings)
        except (QHFlowError, OSError) as exc:
            outcome.exit_code = handle_command_error(exc)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
