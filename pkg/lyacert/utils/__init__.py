from .logging import setup_logging, collect_discrepancies, RichExceptionHandler, DiscrepancyHandler
from .filters import DiscrepancyFilter
from .base import atomic_write, write_json, write_csv, read_json, dumps, finite_or_none
