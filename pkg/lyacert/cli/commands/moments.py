from cleo import option
from lyacert.moments import certify, certify_gozlan, moment_table
from .command import BaseCommand, EXIT_ACCEPTED, OptionError, csv_option, out_option


class MomentsCommand(BaseCommand):
    name = "moments"
    description = "Moment bounds, factorial envelope and exponential bound from Lyapunov constants."
    options = [
        option(
            "constants",
            None,
            description="Lyapunov constants in such format: {c},{b}.",
            flag=False,
            value_required=True,
        ),
        option(
            "gozlan",
            None,
            description="Gozlan constants in such format: {lambda1'},{lambda2'}.",
            flag=False,
            value_required=True,
        ),
        option("delta", "d", description="Exponent to certify.", flag=False, value_required=True),
        option(
            "n-max",
            None,
            description="Number of moment bounds to compute.",
            flag=False,
            value_required=False,
            default="20",
        ),
        option(
            "gamma",
            None,
            description="Envelope rate. The midpoint of its admissible range by default.",
            flag=False,
            value_required=True,
        ),
        out_option(),
        csv_option("Path to write the table of moment bounds to."),
    ]

    def process(self) -> int:
        delta = self.float_option("delta")
        if delta is None:
            raise OptionError("--delta is required.")
        kwargs = {"n_max": self.int_option("n-max"), "gamma": self.float_option("gamma")}
        lyapunov, gozlan = self.floats_option("constants", 2), self.floats_option("gozlan", 2)
        if (lyapunov is None) == (gozlan is None):
            raise OptionError("Exactly one of --constants and --gozlan is required.")
        if lyapunov is not None:
            certificate = certify(*lyapunov, delta, **kwargs)
        else:
            certificate = certify_gozlan(*gozlan, delta, **kwargs)
        self.write_report(certificate.to_dict())
        self.write_table(moment_table(certificate))
        self.line(f"Cenv = {certificate.c_env} (n* = {certificate.n_star})")
        self.line(f"gamma = {certificate.gamma}")
        self.line(f"expBound = {certificate.exp_bound}", style="info")
        return EXIT_ACCEPTED
