"""Logging helpers"""

import logging
import os

LOG_FORMAT = "%(asctime)s [%(levelname)8s] %(message)s (%(filename)s:%(lineno)s)"
LOG_LEVEL_ENV = "FALSESTRUCT_LOG_LEVEL"
ROOT_LOGGER_NAME = "falsestructures"

_configured = False


def _configure_root() -> None:
    global _configured
    if _configured:
        return
    root = logging.getLogger(ROOT_LOGGER_NAME)
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
    root.setLevel(os.environ.get(LOG_LEVEL_ENV, "INFO").upper())
    _configured = True


def get_logger(name: str) -> logging.Logger:
    """Return a logger attached to the package root logger

    Args:
        name (str): usually __name__ of the calling module
    """
    _configure_root()
    if not name.startswith(ROOT_LOGGER_NAME):
        name = f"{ROOT_LOGGER_NAME}.{name}"
    return logging.getLogger(name)


def set_log_level(level: str) -> None:
    """Change the level of every package logger"""
    _configure_root()
    logging.getLogger(ROOT_LOGGER_NAME).setLevel(level.upper())
