# SPDX-License-Identifier: MIT

from pathlib import Path
from typing import Optional, Union


class UniquenessError(Exception):
    """Base class of every error raised by :mod:`cellboard.uniqueness`."""


class ParameterError(UniquenessError, ValueError):
    """A parameter lies outside the domain of an operation."""


class BoundError(UniquenessError, ValueError):
    """An enumeration or resource bound would be exceeded."""


class ReportIOError(UniquenessError, OSError):
    def __init__(self, path: Union[str, Path], reason: str) -> None:
        self.path = Path(path)
        super().__init__(f"Could not access '{self.path}': {reason}")


class OverlayParseError(UniquenessError, ValueError):
    def __init__(self, path: Union[str, Path], line_number: Optional[int], reason: str) -> None:
        self.path = Path(path)
        self.line_number = line_number
        where = f"{self.path}" if line_number is None else f"{self.path}:{line_number}"
        super().__init__(f"Malformed overlay file {where}: {reason}")
