from typing import Dict, List, Optional
import re
import pandas as pd
from pathlib import Path
from loguru import logger
from cleo import Command, option
from lyacert.errors import CertificationError, DeltaRejectedError
from lyacert.problems import Problem
from lyacert.utils import write_csv, write_json

EXIT_ACCEPTED = 0
EXIT_INPUT_ERROR = 1
EXIT_REJECTED = 2


class OptionError(CertificationError):
    pass


def problem_option():
    return option(
        "problem",
        "p",
        description="Problem file in JSON or JsonNet format.",
        flag=False,
        value_required=True,
    )


def out_option():
    return option(
        "out", "o", description="Path to write the JSON report to.", flag=False, value_required=True
    )


def csv_option(description: str = "Path to write the CSV table to."):
    return option("csv", None, description=description, flag=False, value_required=True)


def dimension_option(default: str = "1"):
    return option(
        "dimension",
        "m",
        description="Dimension.",
        flag=False,
        value_required=False,
        default=default,
    )


def seed_option():
    return option(
        "seed",
        None,
        description="Random state for Metropolis runs. Required whenever sampling is used.",
        flag=False,
        value_required=True,
    )


def extra_vars_option():
    return option(
        "extra-vars",
        None,
        description=(
            "Extra variables to inject in JsonNet problem in such format: "
            "{key_name1}={new_value1},{key_name2}={new_value2},..."
        ),
        flag=False,
        value_required=False,
    )


def progress_option():
    return option(
        "progress", None, description="Show progress bars for long scans.", flag=True
    )


class BaseCommand(Command):
    # Commands implement `process` and return an exit code:
    # `0` when accepted, `2` when rejected with reasons, `1` on input errors.
    # (Kept as a comment: cleo parses a multi-line docstring as the command signature.)

    def handle(self) -> int:
        try:
            return self.process()
        except DeltaRejectedError as error:
            self.line_error(f"Rejected: {error.message}", style="error")
            return EXIT_REJECTED
        except CertificationError as error:
            logger.debug(f"{type(error).__name__}: {error.message}")
            self.line_error(f"{type(error).__name__}: {error.message}", style="error")
            return EXIT_INPUT_ERROR

    def process(self) -> int:
        raise NotImplementedError()

    def parse_extra_vars(self) -> Optional[Dict[str, str]]:
        extra_vars = self.option("extra-vars")
        regex = r"([a-z0-9\_\-\.\+\\\/]+)=([a-z0-9\_\-\.\+\\\/]+)"
        return (
            {param: value for param, value in re.findall(regex, extra_vars, flags=re.I)}
            if extra_vars is not None else None
        )

    def float_option(self, name: str, default: Optional[float] = None) -> Optional[float]:
        value = self.option(name)
        if value is None:
            return default
        try:
            return float(value)
        except ValueError:
            raise OptionError(f"--{name} expects a number, got {value!r}.")

    def int_option(self, name: str, default: Optional[int] = None) -> Optional[int]:
        value = self.option(name)
        if value is None:
            return default
        try:
            return int(float(value)) if "e" in str(value).lower() else int(value)
        except ValueError:
            raise OptionError(f"--{name} expects an integer, got {value!r}.")

    def floats_option(self, name: str, count: Optional[int] = None) -> Optional[List[float]]:
        """Comma-separated numbers, e.g. `--constants 0.25,0.5`."""
        value = self.option(name)
        if value is None:
            return None
        try:
            numbers = [float(part) for part in value.split(",") if part.strip()]
        except ValueError:
            raise OptionError(f"--{name} expects comma-separated numbers, got {value!r}.")
        if count is not None and len(numbers) != count:
            raise OptionError(f"--{name} expects {count} numbers, got {len(numbers)}.")
        return numbers

    def load_problem(self) -> Problem:
        path = self.option("problem")
        if path is None:
            raise OptionError("--problem is required.")
        return Problem.from_file(Path(path), ext_vars=self.parse_extra_vars())

    def write_report(self, data: Dict) -> None:
        out = self.option("out")
        if out is not None:
            write_json(out, data)
            self.line(f"Report written to {out}", style="info")

    def write_table(self, table: pd.DataFrame) -> None:
        path = self.option("csv")
        if path is not None:
            write_csv(path, table)
            self.line(f"Table written to {path}", style="info")

    def write_tables(self, tables: Dict[str, pd.DataFrame]) -> None:
        """Every table goes to `<csv directory>/<name>.csv`."""
        directory = self.option("csv")
        if directory is None:
            return
        for name, table in tables.items():
            write_csv(Path(directory) / f"{name}.csv", table)
        self.line(f"{len(tables)} tables written to {directory}", style="info")
