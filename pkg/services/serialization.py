"""
Utility functions turning domain objects into JSON text.
"""
import dataclasses
import json
from enum import Enum
from typing import Any

import numpy as np


def serialize_for_json(obj: Any) -> Any:
    """
    Convert objects to JSON-serializable format.
    Handles enums, dataclasses, tuples and numpy scalars/arrays.
    """
    if isinstance(obj, dict):
        return {str(key): serialize_for_json(value) for key, value in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [serialize_for_json(item) for item in obj]
    elif isinstance(obj, Enum):
        return obj.value
    elif isinstance(obj, np.ndarray):
        return serialize_for_json(obj.tolist())
    elif isinstance(obj, np.generic):
        return obj.item()
    elif dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            field.name: serialize_for_json(getattr(obj, field.name))
            for field in dataclasses.fields(obj)
        }
    else:
        return obj


def to_json(data: Any) -> str:
    """
    Stable JSON text: two-space indent, insertion-ordered keys, shortest
    round-trip floats, trailing newline.
    """
    return json.dumps(serialize_for_json(data), indent=2, ensure_ascii=False, allow_nan=False) + "\n"
