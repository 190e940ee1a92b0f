import functools
from typing import Callable, Optional

from pydantic import ValidationError

from matchstack.config import setting
from matchstack.model.common import ExitCode
from matchstack.utils.logger import Logger

config = setting.get_settings()
logger = Logger("matchstack.services.middleware")

class MatchstackError(Exception):
    def __init__(self, message: str, code: int = ExitCode.FAILURE):
        super().__init__(message)
        self.message = message
        self.code = int(code)

class HistoryIndexError(MatchstackError, IndexError):
    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message, ExitCode.USAGE)
        self.step = step

class InvalidTreeError(MatchstackError, ValueError):
    def __init__(self, message: str):
        super().__init__(message, ExitCode.USAGE)

class UndefinedExponentError(MatchstackError, ValueError):
    def __init__(self, message: str):
        super().__init__(message, ExitCode.CONTRACT)

class ContractError(MatchstackError, ValueError):
    def __init__(self, message: str):
        super().__init__(message, ExitCode.CONTRACT)

class RefusalError(MatchstackError, RuntimeError):
    def __init__(self, message: str):
        super().__init__(message, ExitCode.REFUSAL)

class ParseError(MatchstackError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, ExitCode.PARSE)
        self.line = line

class UsageError(MatchstackError, ValueError):
    def __init__(self, message: str):
        super().__init__(message, ExitCode.USAGE)

def validation_message(ve: ValidationError) -> str:
    """First pydantic error as a single line."""
    errors = ve.errors()
    if not errors:
        return str(ve)
    first = errors[0]
    location = ".".join(str(part) for part in first.get("loc", ()))
    return f"{location}: {first.get('msg')}" if location else str(first.get("msg"))

def handle_exceptions(func: Callable[..., int]) -> Callable[..., int]:
    """Turn errors raised by a CLI command into logged exit codes."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)
        except MatchstackError as me:
            logger.warning(
                "Command error",
                command=func.__name__,
                error=me.message,
                error_type=type(me).__name__,
                exit_code=me.code
            )
            return me.code
        except ValidationError as ve:
            logger.warning(
                "Validation error",
                command=func.__name__,
                error=validation_message(ve),
                error_type="ValidationError"
            )
            return int(ExitCode.PARSE)
        except KeyboardInterrupt:
            logger.warning("Operation cancelled by user", command=func.__name__)
            return int(ExitCode.FAILURE)
        except Exception as e:
            logger.exception(
                "Unexpected error",
                command=func.__name__,
                error_type=type(e).__name__,
                app_env=config.app_env
            )
            return int(ExitCode.FAILURE)

    return wrapper
