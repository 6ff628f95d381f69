from typing import Any, Dict, Union
import os
import json
import math
import tempfile
import numpy as np
import pandas as pd
from enum import Enum
from pathlib import Path


def atomic_write(path: Union[str, Path], text: str) -> None:
    """Write `text` to a temporary file next to `path` and move it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.NamedTemporaryFile(
        "w", encoding="utf-8", dir=path.parent, prefix=f".{path.name}.", delete=False
    ) as file:
        file.write(text)
        temporary = file.name
    os.replace(temporary, path)


def to_serializable(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, pd.DataFrame):
        return value.to_dict(orient="list")
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dumps(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False, default=to_serializable) + "\n"


def write_json(path: Union[str, Path], data: Dict[str, Any]) -> None:
    atomic_write(path, dumps(data))


def write_csv(path: Union[str, Path], table: pd.DataFrame) -> None:
    atomic_write(path, table.to_csv(index=False))


def read_json(path: Union[str, Path]) -> Dict[str, Any]:
    with Path(path).open("r", encoding="utf-8") as file:
        return json.load(file)


def finite_or_none(value: float) -> Any:
    return value if value is not None and math.isfinite(value) else None
