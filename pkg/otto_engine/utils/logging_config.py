"""
Logging Configuration
=====================
Centralized logging setup for the Otto engine toolkit.
Provides structured logging with consistent formatting across all modules.
"""

import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional

from colorama import Fore, Style, just_fix_windows_console

ROOT_LOGGER_NAME = "otto"


class StructuredFormatter(logging.Formatter):
    """
    Formatter that outputs structured JSON logs.
    Used for log files and for machine-read runs (--structured-logs).
    """

    def format(self, record: logging.LogRecord) -> str:
        """Format log record as JSON."""
        log_data = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        if hasattr(record, "extra_data"):
            log_data["data"] = record.extra_data

        return json.dumps(log_data, default=str)


class ColoredFormatter(logging.Formatter):
    """
    Colored formatter for console output.
    Makes sweep and validation logs easier to follow interactively.
    """

    COLORS = {
        "DEBUG": Fore.CYAN,
        "INFO": Fore.GREEN,
        "WARNING": Fore.YELLOW,
        "ERROR": Fore.RED,
        "CRITICAL": Fore.MAGENTA,
    }

    def format(self, record: logging.LogRecord) -> str:
        """Format log record with colors."""
        color = self.COLORS.get(record.levelname, "")
        timestamp = datetime.now(timezone.utc).strftime("%Y-%m-%d %H:%M:%S")

        formatted = (
            f"{color}[{timestamp}] "
            f"{record.levelname:8s}{Style.RESET_ALL} "
            f"[{record.name}] "
            f"{record.getMessage()}"
        )

        if record.exc_info:
            formatted += f"\n{self.formatException(record.exc_info)}"

        return formatted


def setup_logging(
    level: str = "INFO",
    log_file: Optional[str] = None,
    structured: bool = False,
) -> logging.Logger:
    """
    Set up logging for the application.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional path to a log file (always structured)
        structured: Use structured JSON logging on the console

    Returns:
        Configured package root logger
    """
    just_fix_windows_console()
    numeric_level = getattr(logging, level.upper())

    logger = logging.getLogger(ROOT_LOGGER_NAME)
    logger.setLevel(numeric_level)
    logger.handlers.clear()

    # Console goes to stderr; stdout is reserved for reports.
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(StructuredFormatter() if structured else ColoredFormatter())
    logger.addHandler(console_handler)

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(StructuredFormatter())
        logger.addHandler(file_handler)

    return logger


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger below the package namespace.

    Args:
        name: Logger name (module short name)

    Returns:
        Logger instance named ``otto.<name>``
    """
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")


# =============================================================================
# LOG HELPERS
# =============================================================================

def log_operation_call(logger: logging.Logger, operation: str, params: Dict[str, Any]):
    """Log a library operation together with its parameters."""
    logger.debug(f"Operation: {operation}", extra={"extra_data": params})


def log_check_result(logger: logging.Logger, check: str, passed: bool, residual: float, tolerance: float):
    """Log the outcome of a cross-validation check."""
    level = logging.INFO if passed else logging.ERROR
    logger.log(
        level,
        f"Check: {check} - {'PASS' if passed else 'FAIL'} (residual={residual:.3e}, tol={tolerance:.1e})",
        extra={"extra_data": {"check": check, "passed": passed, "residual": residual, "tolerance": tolerance}},
    )


def log_sweep_row(logger: logging.Logger, sweep: str, index: int, total: int, values: Dict[str, Any]):
    """Log completion of one sweep grid point."""
    logger.debug(f"Sweep {sweep}: row {index + 1}/{total}", extra={"extra_data": values})
