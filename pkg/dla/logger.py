import os
import sys
import logging
import datetime
from pathlib import Path

LOGGER_NAME = "dla"
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logger(level="WARNING", log_dir=None):
    """Configure the package logger: stderr always, a timestamped file when log_dir is set"""
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT)
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)
    logger.addHandler(stream_handler)

    if log_dir:
        Path(log_dir).mkdir(parents=True, exist_ok=True)
        timestamp = datetime.datetime.now().strftime("%Y%m%d_%H%M%S")
        log_file = os.path.join(log_dir, f"dla_{timestamp}.log")
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
        logger.info(f"Logging to {log_file}")

    # Reports go to stdout; keep log records out of the root handlers
    logger.propagate = False

    logger.debug(f"Python version: {sys.version}")
    logger.debug(f"Platform: {sys.platform}")
    return logger


def get_logger():
    """Get the package logger, configuring it on first use"""
    logger = logging.getLogger(LOGGER_NAME)
    if not logger.handlers:
        return setup_logger()
    return logger
