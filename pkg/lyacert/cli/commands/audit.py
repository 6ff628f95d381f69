from cleo import option
from .command import (
    BaseCommand,
    EXIT_ACCEPTED,
    EXIT_REJECTED,
    OptionError,
    csv_option,
    dimension_option,
    progress_option,
    seed_option,
)
from lyacert.oracle import audit_random


class AuditCommand(BaseCommand):
    name = "audit"
    description = "Finite-difference audit of symbolic derivatives on random expressions."
    options = [
        option(
            "count",
            None,
            description="Number of random expressions.",
            flag=False,
            value_required=False,
            default="100",
        ),
        option(
            "depth",
            None,
            description="Depth of the random expression trees.",
            flag=False,
            value_required=False,
            default="3",
        ),
        dimension_option(default="2"),
        seed_option(),
        csv_option("Path to write the audit table to."),
        progress_option(),
    ]

    def process(self) -> int:
        seed = self.int_option("seed")
        if seed is None:
            raise OptionError("--seed is required: random expressions must be reproducible.")
        count = self.int_option("count")
        table = audit_random(
            count,
            seed,
            m=self.int_option("dimension"),
            depth=self.int_option("depth"),
            progress=self.option("progress"),
        )
        self.write_table(table)
        failed = int((~table["passed"]).sum()) if count else 0
        if failed:
            for row in table.loc[~table["passed"]].itertuples():
                self.line_error(f"{row.expression}: relative error {row.relative_error:.3g}")
            return EXIT_REJECTED
        self.line(f"All {count} expressions passed.", style="info")
        return EXIT_ACCEPTED
