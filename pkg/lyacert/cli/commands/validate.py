import json
from cleo import option
from lyacert.problems import CertificateReport, Problem, ProblemFileError
from lyacert.utils import read_json
from .command import BaseCommand, EXIT_ACCEPTED, EXIT_REJECTED, OptionError


class ValidateCommand(BaseCommand):
    name = "validate"
    description = "Re-read a certificate report and re-run its pass/fail checks."
    options = [
        option(
            "report",
            "r",
            description="Report written by `certify`.",
            flag=False,
            value_required=True,
        )
    ]

    def process(self) -> int:
        path = self.option("report")
        if path is None:
            raise OptionError("--report is required.")
        try:
            data = read_json(path)
        except (OSError, json.JSONDecodeError) as error:
            raise ProblemFileError(f"Cannot read report {path}: {error}")
        report = CertificateReport.from_dict(data)
        result = Problem.from_dict(report.problem).validate(report)
        for key, value in result.details.items():
            self.line(f"{key}: {value}")
        if result.reproduced:
            self.line("Report reproduced.", style="info")
            return EXIT_ACCEPTED
        self.line_error("Report not reproduced.", style="error")
        return EXIT_REJECTED
