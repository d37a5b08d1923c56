"""
Error hierarchy and process exit statuses.

Library code raises these exceptions; only the command line entry point
turns them into exit codes.
"""

from enum import IntEnum
from typing import Optional, Sequence


class ExitStatus(IntEnum):
    """Process exit codes"""
    OK = 0
    USAGE = 1
    DATA = 2
    NUMERICAL = 3


class AnalysisError(Exception):
    """Base class for every error raised by the toolkit"""
    exit_status = ExitStatus.USAGE


class ConfigError(AnalysisError):
    """Invalid configuration, missing input paths or bad command line usage"""
    exit_status = ExitStatus.USAGE


class DataError(AnalysisError):
    """Malformed corpus, keyword or series input"""
    exit_status = ExitStatus.DATA

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyDiscourseError(DataError):
    """No documents are left for a discourse after filtering"""


class NumericalError(AnalysisError):
    """A numerical kernel cannot produce a meaningful result"""
    exit_status = ExitStatus.NUMERICAL


class DegenerateSeriesError(NumericalError):
    """A series is too short or too flat for the requested analysis"""


class CollinearityError(NumericalError):
    """A least-squares design matrix is rank deficient"""

    def __init__(self, columns: Sequence[int]):
        self.columns = tuple(int(c) for c in columns)
        super().__init__(f"Design matrix is rank deficient; collinear columns: {list(self.columns)}")
