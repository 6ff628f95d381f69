import pandas as pd
from cleo import option
from lyacert.expr import parse
from lyacert.oracle import OracleReport, gaussian_tail_integral, integrate_1d
from .command import (
    BaseCommand,
    EXIT_ACCEPTED,
    EXIT_REJECTED,
    OptionError,
    csv_option,
    dimension_option,
    out_option,
    seed_option,
)


class IntegrateCommand(BaseCommand):
    name = "integrate"
    description = "Oracle integrals of exp(delta |x - x0|^2) under exp(-V), or plain 1-D integrals."
    options = [
        option(
            "potential",
            None,
            description="Potential V of the measure proportional to exp(-V).",
            flag=False,
            value_required=True,
        ),
        dimension_option(),
        option("delta", "d", description="Gaussian exponent.", flag=False, value_required=True),
        option(
            "x0", None, description="Base point as {x1},{x2},...", flag=False, value_required=True
        ),
        option(
            "truncations",
            None,
            description="Increasing truncation radii as {T1},{T2},...",
            flag=False,
            value_required=False,
            default="5,10,20,40",
        ),
        option(
            "function",
            "f",
            description="Integrand in x1 for a plain integral over [--lo, --hi].",
            flag=False,
            value_required=True,
        ),
        option("lo", None, description="Lower limit.", flag=False, value_required=True),
        option("hi", None, description="Upper limit.", flag=False, value_required=True),
        seed_option(),
        out_option(),
        csv_option("Path to write the truncation sequence to."),
    ]

    def process(self) -> int:
        if self.option("function") is not None:
            report = self.plain_integral()
        else:
            report = self.tail_integral()
        self.write_report(report.to_dict())
        self.line(f"value = {report.value} +- {report.error_estimate}")
        self.line(f"verdict: {report.verdict.value}", style="info")
        return EXIT_ACCEPTED if report.is_finite else EXIT_REJECTED

    def plain_integral(self) -> OracleReport:
        lo, hi = self.float_option("lo"), self.float_option("hi")
        if lo is None or hi is None:
            raise OptionError("--lo and --hi are required with --function.")
        return integrate_1d(parse(self.option("function"), 1), lo, hi)

    def tail_integral(self) -> OracleReport:
        if self.option("potential") is None:
            raise OptionError("Either --potential or --function is required.")
        m = self.int_option("dimension")
        delta = self.float_option("delta", 0.0)
        report = gaussian_tail_integral(
            parse(self.option("potential"), m),
            delta,
            x0=self.floats_option("x0", m),
            truncations=self.floats_option("truncations"),
            m=m,
            seed=self.int_option("seed"),
        )
        if "truncations" in report.evidence:
            table = pd.DataFrame(
                {
                    "T": report.evidence["truncations"],
                    "value": report.evidence["values"],
                    "log_value": report.evidence["log_values"],
                }
            )
            self.write_table(table)
        return report
