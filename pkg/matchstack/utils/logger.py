import logging
import time
import functools
from typing import Any, Callable, Optional

class Logger:
    """
    Helper class for structured, traceable logging.

    Usage:
        logger = Logger(__name__)
        logger.info("Sweep finished", suite="lemma1", failures=0)
        logger.error("Oracle mismatch", expected="(1,2,1,1)", got="(1,1,2,1)")
    """

    def __init__(self, name: str):
        self.logger = logging.getLogger(name)

    def _log(self, level: int, message: str, **kwargs):
        if kwargs:
            extra_data = " | ".join([f"{k}={v}" for k, v in kwargs.items()])
            full_message = f"{message} | {extra_data}"
        else:
            full_message = message

        # stacklevel=3 reports the caller of debug()/info()/... instead of _log()
        self.logger.log(level, full_message, stacklevel=3)

    def debug(self, message: str, **kwargs):
        self._log(logging.DEBUG, message, **kwargs)

    def info(self, message: str, **kwargs):
        self._log(logging.INFO, message, **kwargs)

    def warning(self, message: str, **kwargs):
        self._log(logging.WARNING, message, **kwargs)

    def error(self, message: str, **kwargs):
        self._log(logging.ERROR, message, **kwargs)

    def exception(self, message: str, exc_info=True, **kwargs):
        """Log an exception with its stack trace."""
        if kwargs:
            extra_data = " | ".join([f"{k}={v}" for k, v in kwargs.items()])
            full_message = f"{message} | {extra_data}"
        else:
            full_message = message
        self.logger.exception(full_message, exc_info=exc_info, stacklevel=2)

    def log_check(self, suite: str, check: str, passed: bool, **kwargs):
        """
        Log a single verification check.

        Example:
            logger.log_check("lemma1", "root-vector", False, instance="[0, 2]")
        """
        level = logging.DEBUG if passed else logging.WARNING
        self._log(level, f"Check: {suite}/{check}", passed=passed, **kwargs)


def log_execution_time(logger: Optional[Logger] = None):
    """
    Decorator logging the execution time of a function.

    Usage:
        @log_execution_time()
        def run_suite(...):
            ...
    """
    def decorator(func: Callable) -> Callable:
        nonlocal logger
        if logger is None:
            logger = Logger(f"{func.__module__}.{func.__name__}")

        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            start_time = time.perf_counter()
            func_name = func.__name__
            logger.debug(f"Function started: {func_name}")
            try:
                result = func(*args, **kwargs)
                duration_ms = (time.perf_counter() - start_time) * 1000
                logger.info(
                    f"Function completed: {func_name}",
                    duration_ms=round(duration_ms, 2),
                    status="success"
                )
                return result
            except Exception as e:
                duration_ms = (time.perf_counter() - start_time) * 1000
                logger.error(
                    f"Function failed: {func_name}",
                    duration_ms=round(duration_ms, 2),
                    error=str(e),
                    error_type=type(e).__name__
                )
                raise

        return wrapper

    return decorator


class LogTimer:
    """
    Context manager measuring the execution time of a block.

    Usage:
        with LogTimer(logger, "Spin enumeration", vertices=8):
            counts = count_satisfying_by_class(tri)
    """
    def __init__(self, logger: Logger, operation: str, level: int = logging.INFO, **context):
        self.logger = logger
        self.operation = operation
        self.context = context
        self.level = level
        self.start_time = None
        self.elapsed = 0.0

    def __enter__(self):
        self.start_time = time.perf_counter()
        self.logger.debug(f"Starting: {self.operation}", **self.context)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.elapsed = time.perf_counter() - self.start_time
        duration_ms = self.elapsed * 1000

        if exc_type is None:
            done = self.logger.debug if self.level <= logging.DEBUG else self.logger.info
            done(
                f"Completed: {self.operation}",
                duration_ms=round(duration_ms, 2),
                status="success",
                **self.context
            )
        else:
            self.logger.error(
                f"Failed: {self.operation}",
                duration_ms=round(duration_ms, 2),
                status="failed",
                error=str(exc_val),
                error_type=exc_type.__name__,
                **self.context
            )

        # Don't suppress exception
        return False
