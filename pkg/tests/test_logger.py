import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path

from utils.logger import configure_logging, get_logger


def file_handlers_for(path):
    return [
        h for h in logging.getLogger().handlers
        if isinstance(h, RotatingFileHandler) and Path(h.baseFilename) == Path(path).resolve()
    ]


def test_same_log_file_gets_one_handler(tmp_path):
    path = tmp_path / "run.log"
    try:
        configure_logging("INFO", path)
        configure_logging("INFO", path)
        assert len(file_handlers_for(path)) == 1

        get_logger("tests.logger").info("written once")
        for handler in file_handlers_for(path):
            handler.flush()
        assert path.read_text(encoding="utf-8").count("written once") == 1
    finally:
        root = logging.getLogger()
        for handler in file_handlers_for(path):
            root.removeHandler(handler)
            handler.close()
