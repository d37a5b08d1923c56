"""
JSON serialization for reports and result files.

Every JSON artifact written by the toolkit goes through this module so that
the output is byte-stable: keys are sorted, floats use the shortest
round-trip representation and the text is UTF-8 with a trailing newline.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)


def encode_document(document: Dict[str, Any]) -> bytes:
    """
    Encode a document dictionary to JSON bytes.

    Args:
        document: Dictionary containing the document data

    Returns:
        UTF-8 encoded JSON bytes

    Raises:
        TypeError: If document contains non-JSON-serializable types
        ValueError: If document contains NaN or infinite floats
    """
    try:
        json_str = json.dumps(document, ensure_ascii=False, sort_keys=True, indent=2, allow_nan=False)
        return (json_str + "\n").encode('utf-8')
    except (TypeError, ValueError) as e:
        logger.error(f"Failed to encode document: {e}")
        raise


def decode_document(data: bytes) -> Dict[str, Any]:
    """
    Decode JSON bytes to a document dictionary.

    Raises:
        ValueError: If data is not valid JSON or not a JSON object
        UnicodeDecodeError: If data is not valid UTF-8
    """
    try:
        document = json.loads(data.decode('utf-8'))

        if not isinstance(document, dict):
            raise ValueError(f"Expected dict, got {type(document).__name__}")

        return document
    except (ValueError, UnicodeDecodeError) as e:
        logger.error(f"Failed to decode document: {e}")
        raise


def write_json(path: Path, document: Dict[str, Any]) -> None:
    """Write a document to a JSON file"""
    path.write_bytes(encode_document(document))


def read_json(path: Path) -> Dict[str, Any]:
    """Read a JSON object from a file"""
    return decode_document(path.read_bytes())


def finite_or_none(value: float) -> Optional[float]:
    """JSON has no infinities or NaN; write them as null"""
    return value if math.isfinite(value) else None
