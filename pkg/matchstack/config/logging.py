import logging
import os
import sys
import json
from datetime import datetime
from contextvars import ContextVar

from matchstack.config.setting import Settings

# --- 1. CONTEXT VARIABLES (tracing) ---
run_id_ctx = ContextVar("run_id", default="-")
suite_ctx = ContextVar("suite", default="-")
instance_ctx = ContextVar("instance", default="-")

# --- 2. CUSTOM JSON FORMATTER ---
class JSONFormatter(logging.Formatter):
    def format(self, record):
        log_record = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat(),
            "level": record.levelname,
            "message": record.getMessage(),
            "logger_name": record.name,
            "module": record.module,
            "func_name": record.funcName,
            "line_no": record.lineno,
            "run_id": run_id_ctx.get(),
            "suite": suite_ctx.get(),
            "instance": instance_ctx.get(),
        }

        if record.exc_info:
            log_record["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_record)

# --- 3. FILTER FOR THIRD-PARTY LOGGERS ---
class AppOnlyFilter(logging.Filter):
    """
    Pass every record of the application loggers; from other libraries
    (networkx, numpy, multiprocessing) only WARNING and above.
    """
    def __init__(self, app_prefix="matchstack"):
        super().__init__()
        self.app_prefix = app_prefix

    def filter(self, record):
        if record.name.startswith(self.app_prefix):
            return True
        return record.levelno >= logging.WARNING

def get_logging_config(settings: Settings):
    handlers = {
        # stdout carries JSON-lines results, logs go to stderr
        "consoleHandler": {
            "class": "logging.StreamHandler",
            "level": settings.log_level.upper(),
            "formatter": "json",
            "stream": sys.stderr,
            "filters": ["app_only"]
        },
    }
    if settings.log_to_file:
        os.makedirs(settings.log_dir, exist_ok=True)
        handlers["appHandler"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "level": "DEBUG",
            "formatter": "json",
            "filename": os.path.join(settings.log_dir, "app.log"),
            "maxBytes": 10*1024*1024,
            "backupCount": 5,
            "encoding": "utf-8",
            "filters": ["app_only"]
        }
        handlers["errorHandler"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "level": "ERROR",
            "formatter": "json",
            "filename": os.path.join(settings.log_dir, "error.log"),
            "maxBytes": 10*1024*1024,
            "backupCount": 5,
            "encoding": "utf-8",
            "filters": ["app_only"]
        }

    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "json": {
                "()": JSONFormatter,
            },
        },
        "filters": {
            "app_only": {
                "()": AppOnlyFilter,
                "app_prefix": "matchstack"
            }
        },
        "handlers": handlers,
        "loggers": {
            "matchstack": {
                "level": "DEBUG",
                "handlers": list(handlers),
                "propagate": False
            },
            "networkx": {
                "level": "WARNING",
                "handlers": [],
                "propagate": False
            },
        }
    }
