"""
Utility functions: logging and file helpers
"""

import os
import sys
from datetime import datetime
from typing import List, Optional

from .errors import InvalidInputError

_verbose = False


def set_verbose(enabled: bool) -> None:
    """Turn timestamped progress logging on or off"""
    global _verbose
    _verbose = enabled


def is_verbose() -> bool:
    return _verbose


def log(message: str, level: str = "INFO") -> None:
    """Log a message with timestamp if verbose mode is enabled"""
    if _verbose or level in ("WARN", "ERROR"):
        timestamp = datetime.now().strftime("%H:%M:%S")
        print(f"[{timestamp}] [{level}] {message}", file=sys.stderr)


def ensure_directory(path: str) -> None:
    """Ensure a directory exists, creating it if necessary"""
    if path:
        os.makedirs(path, exist_ok=True)


def read_text(file_path: str) -> str:
    """Read a text file, turning I/O failures into InvalidInputError"""
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return f.read()
    except (FileNotFoundError, IOError, UnicodeDecodeError) as e:
        raise InvalidInputError(f"cannot read {file_path}: {e}") from e


def write_text(file_path: str, content: str) -> None:
    """Write content to a file, creating parent directories if needed"""
    ensure_directory(os.path.dirname(file_path))
    with open(file_path, "w", encoding="utf-8") as f:
        f.write(content)


def content_lines(text: str) -> List[str]:
    """Non-empty lines with `#` comment lines dropped"""
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append(line)
    return lines


def format_list(items: List[str], max_display: int = 20, empty: Optional[str] = "none") -> str:
    """Format a list of items for display"""
    if not items:
        return empty or ""
    if len(items) <= max_display:
        return ", ".join(items)
    remaining = len(items) - max_display
    return ", ".join(items[:max_display]) + f" ... and {remaining} more"
