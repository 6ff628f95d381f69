from cleo import option
from lyacert.jump import gaussian_series, parse_rule, series_table
from lyacert.oracle import series_sum
from .command import (
    BaseCommand,
    EXIT_ACCEPTED,
    EXIT_REJECTED,
    OptionError,
    csv_option,
    extra_vars_option,
    out_option,
    problem_option,
    progress_option,
)


class SeriesCommand(BaseCommand):
    name = "series"
    description = "Series oracle: sum of exp(log-term) over an index range, or the jump series."
    options = [
        option(
            "log-term",
            None,
            description="Logarithm of the term as an expression in i, e.g. `-2 * log(i)`.",
            flag=False,
            value_required=True,
        ),
        option(
            "i-min", None, description="First index.", flag=False, value_required=False, default="0"
        ),
        option(
            "i-max",
            None,
            description="Last index.",
            flag=False,
            value_required=False,
            default="1000000",
        ),
        problem_option(),
        option(
            "delta",
            "d",
            description="Exponent of sum mu(i) exp(delta rho(i, 0)^2) for a jump problem.",
            flag=False,
            value_required=True,
        ),
        out_option(),
        csv_option("Path to write the series table (i, mu, rho, term, partial_sum) to."),
        extra_vars_option(),
        progress_option(),
    ]

    def process(self) -> int:
        i_max = self.int_option("i-max")
        if self.option("problem") is not None:
            problem = self.load_problem()
            if problem.kind != "jump":
                raise OptionError(f"--problem must be a jump chain, got kind {problem.kind!r}.")
            delta = self.float_option("delta", problem.delta)
            if delta is None:
                raise OptionError("--delta is required when the problem file has none.")
            report = gaussian_series(
                problem.chain, delta, i_max=i_max, progress=self.option("progress")
            )
            self.write_table(series_table(problem.chain, delta, i_max))
        elif self.option("log-term") is not None:
            report = series_sum(
                parse_rule(self.option("log-term")),
                i_max,
                i_min=self.int_option("i-min"),
                progress=self.option("progress"),
            )
        else:
            raise OptionError("Either --log-term or --problem is required.")
        self.write_report(report.to_dict())
        self.line(f"tail slope = {report.evidence['tail_slope']}")
        self.line(f"value = {report.value} ({report.verdict.value})", style="info")
        return EXIT_ACCEPTED if report.is_finite else EXIT_REJECTED
