from typing import Any, Collection, Dict, Optional


class DiscrepancyFilter:
    """
    Loguru filter for records bound with `discrepancy=<name>`.

    Parameters
    ----------
    names : `Collection[str]`, optional (default = `None`)
        Keep only these discrepancy names. Every name is kept by default.
    """

    def __init__(self, names: Optional[Collection[str]] = None) -> None:
        self._names = None if names is None else frozenset(names)

    def __repr__(self) -> str:
        names = "*" if self._names is None else ",".join(sorted(self._names))
        return f"{type(self).__name__}({names})"

    def __call__(self, record: Dict[str, Any]) -> bool:
        name = record["extra"].get("discrepancy")
        return name is not None and (self._names is None or name in self._names)
