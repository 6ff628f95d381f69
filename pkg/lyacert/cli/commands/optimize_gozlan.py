from cleo import option
from lyacert.gozlan import A_GOZLAN, optimize_parameters
from .command import BaseCommand, EXIT_ACCEPTED, csv_option, dimension_option, out_option


class OptimizeGozlanCommand(BaseCommand):
    name = "optimize-gozlan"
    description = "Largest exponent admitted by the Gozlan-type condition in dimension m."
    options = [
        dimension_option(),
        option(
            "a-coefficient",
            "a",
            description="Coefficient of (d_i V)^2 in the condition, below 1 - 4(m-1)/(27m).",
            flag=False,
            value_required=False,
            default=repr(A_GOZLAN),
        ),
        option(
            "points",
            None,
            description="Grid size of the search over eps1.",
            flag=False,
            value_required=False,
            default="10000",
        ),
        out_option(),
        csv_option("Path to write the optimizer trace (eps1, delta) to."),
    ]

    def process(self) -> int:
        m = self.int_option("dimension")
        result = optimize_parameters(
            m, a=self.float_option("a-coefficient"), points=self.int_option("points")
        )
        self.write_report({"m": m, **result.to_dict()})
        self.write_table(result.trace)
        self.line(f"eps1* = {result.eps1}, eps3* = {result.eps3}")
        self.line(f"closed form = {result.closed_form}")
        self.line(f"delta* = {result.delta}", style="info")
        return EXIT_ACCEPTED
