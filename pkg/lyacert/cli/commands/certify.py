from .command import (
    BaseCommand,
    EXIT_ACCEPTED,
    EXIT_REJECTED,
    csv_option,
    extra_vars_option,
    out_option,
    problem_option,
    progress_option,
    seed_option,
)
from cleo import option


class CertifyCommand(BaseCommand):
    name = "certify"
    description = "Certify Gaussian integrability for a problem file and write the report."
    options = [
        problem_option(),
        option(
            "delta",
            "d",
            description="Exponent to certify. Overrides `delta` of the problem file.",
            flag=False,
            value_required=True,
        ),
        out_option(),
        csv_option("Directory to write the CSV tables of the run to."),
        seed_option(),
        extra_vars_option(),
        progress_option(),
    ]

    def process(self) -> int:
        problem = self.load_problem()
        report = problem.certify(
            delta=self.float_option("delta"),
            seed=self.int_option("seed"),
            progress=self.option("progress"),
        )
        self.write_report(report.to_dict())
        self.write_tables(report.tables)
        if report.accepted:
            bound = report.certificate.get("weighted_bound", report.certificate.get("expBound"))
            self.line(
                f"Accepted {problem.kind} certificate for delta = {report.certificate['delta']}"
                + (f" with bound {bound}" if bound is not None else ""),
                style="info",
            )
            return EXIT_ACCEPTED
        for reason in report.reasons:
            self.line_error(f"Rejected: {reason}", style="error")
        return EXIT_REJECTED
