import sys

from loguru import logger as frac_logger

from src.infrastructure.config.settings import LOG_FILE, LOG_LEVEL

frac_logger.remove()

# ``run`` is bound by the CLI to "<command> seed=<seed>"; library calls outside a run log "-".
frac_logger.configure(extra={"run": "-"})

frac_logger.add(
    sys.stderr,
    format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <magenta>{extra[run]}</magenta> | <cyan>{file}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
    level=LOG_LEVEL,
    colorize=True,
    backtrace=True,
    diagnose=False,
)

if LOG_FILE:
    frac_logger.add(
        LOG_FILE,
        format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {extra[run]} | {file}:{function}:{line} - {message}",
        level="DEBUG",
        rotation="1 day",
        retention="30 days",
        compression="zip",
    )
