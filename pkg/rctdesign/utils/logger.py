import logging
import os

from dotenv import load_dotenv

load_dotenv()


def get_logger(name: str) -> logging.Logger:
    logger = logging.getLogger(f"rctdesign.{name}")
    if not logger.handlers:
        handler = logging.StreamHandler()
        fmt = "%(asctime)s %(levelname)s %(name)s: %(message)s"
        handler.setFormatter(logging.Formatter(fmt))
        logger.addHandler(handler)
        logger.setLevel(os.getenv("RCTDESIGN_LOG_LEVEL", "INFO").upper())
        logger.propagate = False
    return logger


def set_level(level: int) -> None:
    """Apply `level` to every rctdesign logger created so far."""
    for name, obj in logging.Logger.manager.loggerDict.items():
        if name.startswith("rctdesign.") and isinstance(obj, logging.Logger):
            obj.setLevel(level)
