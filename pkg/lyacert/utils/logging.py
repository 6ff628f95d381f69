from typing import Any, Collection, Dict, Iterator, List, Optional, Union
import logging
from loguru import logger
from contextlib import contextmanager
from rich.console import Console
from .filters import DiscrepancyFilter


class RichExceptionHandler(logging.Handler):
    """Much better Rich handler which works with Loguru."""

    def __init__(self, level: Union[int, str] = logging.NOTSET) -> None:
        super().__init__(level=level)
        self._console = Console(stderr=True)

    def emit(self, record: logging.LogRecord) -> None:
        if record.exc_info:
            self._console.print_exception(show_locals=True)


class DiscrepancyHandler(logging.Handler):
    """
    Collect records bound with `discrepancy=<name>`: numerical findings
    that disagree with a stated property of the theory. They end up in the
    provenance section of a report instead of failing the run.
    """

    def __init__(self, sink: List[Dict[str, Any]], level: Union[int, str] = logging.NOTSET) -> None:
        super().__init__(level=level)
        self._sink = sink

    def emit(self, record: logging.LogRecord) -> None:
        self._sink.append(
            {"name": record.extra.get("discrepancy"), "message": record.getMessage().rstrip()}
        )


@contextmanager
def collect_discrepancies(
    names: Optional[Collection[str]] = None,
) -> Iterator[List[Dict[str, Any]]]:
    """Collect `{"name", "message"}` of discrepancies logged inside the block."""
    collected: List[Dict[str, Any]] = []
    handler_id = logger.add(
        DiscrepancyHandler(collected),
        filter=DiscrepancyFilter(names),
        format="{message}",
    )
    try:
        yield collected
    finally:
        logger.remove(handler_id)


def setup_logging() -> None:
    logger.add(RichExceptionHandler(), level=logging.ERROR, format="{message}")
