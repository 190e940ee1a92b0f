import json
import os
import sys
import uuid
from multiprocessing import Pool
from typing import Any, Callable, Iterable, Iterator, Optional, TextIO, Tuple

from matchstack.config.setting import get_settings
from matchstack.utils.logger import Logger
from matchstack.services.middleware import ParseError

logger = Logger("matchstack.utils.utility")

def generate_uuid() -> str:
    return str(uuid.uuid4().hex)

def is_none(variable, default_value):
    return default_value if variable is None else variable

def read_source(path: str) -> str:
    """Read a whole input file; "-" means standard input."""
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()

def iter_json_lines(text: str) -> Iterator[Tuple[int, Any]]:
    """
    Yield (line_no, value) for each non-blank line. A document that is a
    single JSON value spread over several lines is yielded once with line 1.
    """
    stripped = text.strip()
    if not stripped:
        return
    lines = text.splitlines()
    non_blank = [(no, line) for no, line in enumerate(lines, start=1) if line.strip()]
    if len(non_blank) > 1:
        try:
            yield 1, json.loads(stripped)
            return
        except json.JSONDecodeError:
            pass
    for line_no, line in non_blank:
        try:
            yield line_no, json.loads(line)
        except json.JSONDecodeError as jde:
            raise ParseError(f"invalid JSON ({jde.msg})", line=line_no) from jde

def write_json_line(value: Any, stream: Optional[TextIO] = None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(value, separators=(",", ":")) + "\n")

def effective_workers(threads: Optional[int] = None) -> int:
    cores = os.cpu_count() or 1
    cap = is_none(threads, get_settings().threads)
    return max(1, min(cap, cores)) if cap else cores

def parallel_map(func: Callable, items: Iterable, chunksize: int = 16, threads: Optional[int] = None) -> Iterator:
    """
    Ordered map over a process pool; falls back to the builtin map when
    only one worker is allowed. `func` must be a module-level function.
    """
    workers = effective_workers(threads)
    if workers == 1:
        yield from map(func, items)
        return
    logger.debug("Starting worker pool", workers=workers, chunksize=chunksize)
    with Pool(processes=workers) as pool:
        yield from pool.imap(func, items, chunksize=chunksize)
