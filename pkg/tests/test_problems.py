import math
import pytest
from lyacert.errors import CertificationError
from lyacert.expr import ExpressionSyntaxError
from lyacert.jump import delta_search
from lyacert.oracle import divergent
from lyacert.utils import read_json, write_json
from lyacert.problems import (
    CertificateReport,
    DiffusionCertification,
    JumpCertification,
    Problem,
    ProblemFileError,
)

OU = {
    "kind": "diffusion",
    "m": 1,
    "V": "x1^2 / 2",
    "W": "exp(x1^2 / 4)",
    "grid": {"lo": -10, "hi": 10, "n": 401},
}


def test_registry():
    assert Problem.by_name("diffusion") is DiffusionCertification
    assert Problem.by_name("jump") is JumpCertification
    with pytest.raises(ProblemFileError):
        Problem.by_name("hamiltonian")
    with pytest.raises(ProblemFileError):
        Problem.register("diffusion")(DiffusionCertification)


@pytest.mark.parametrize(
    "params",
    [
        {"kind": "hamiltonian"},
        {"kind": "diffusion", "W": "1"},
        {"kind": "diffusion", "V": "x1^2"},
        {**OU, "m": 0},
        {**OU, "delta": "large"},
        [OU],
    ],
)
def test_malformed_problems(params):
    with pytest.raises(ProblemFileError):
        Problem.from_dict(params)


def test_malformed_expression():
    with pytest.raises(ExpressionSyntaxError) as info:
        Problem.from_dict({**OU, "V": "x1^^2"})
    assert isinstance(info.value, CertificationError)


def test_from_file(problems_dir):
    problem = Problem.from_file(problems_dir / "ou.json")
    assert problem.kind == "diffusion"
    assert problem.delta == 0.4
    assert problem.grid_spec.n == 401


def test_jsonnet_ext_vars(problems_dir):
    problem = Problem.from_file(problems_dir / "ou_u_form.jsonnet", ext_vars={"c": "0.25"})
    assert problem.params["c"] == 0.25
    assert problem.given_constants().b == 0.5
    with pytest.raises(ProblemFileError):
        Problem.from_file(problems_dir / "ou_u_form.jsonnet")


def test_invalid_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"kind\": ", encoding="utf-8")
    with pytest.raises(ProblemFileError):
        Problem.from_file(path)


def test_certify_ornstein_uhlenbeck(problems_dir):
    report = Problem.from_file(problems_dir / "ou.json").certify()
    assert report.accepted
    assert report.reasons == []
    assert report.constants["source"] == "fit"
    assert report.constants["c"] == pytest.approx(0.25, rel=1e-6)
    assert report.certificate["source"] == "formula"
    assert report.certificate["delta"] == 0.4
    assert report.certificate["expBound"] >= math.sqrt(5.0)
    tail = report.oracle["gaussian_tail"]
    assert tail["value"] == pytest.approx(math.sqrt(5.0), rel=1e-4)
    assert all(item["holds"] for item in report.oracle["poincare"])
    assert report.provenance["kind"] == "diffusion"
    assert report.provenance["discrepancies"] == []
    assert "moments" in report.tables


def test_certify_rejects_delta_above_threshold(problems_dir):
    report = Problem.from_file(problems_dir / "ou.json").certify(delta=0.5)
    assert not report.accepted
    assert len(report.reasons) == 1
    assert report.provenance["delta"] == 0.5


def test_certify_power_tail_oracle_diverges(problems_dir):
    report = Problem.from_file(problems_dir / "power_tail.json").certify()
    assert not report.accepted
    assert report.violations
    assert report.oracle["gaussian_tail"]["verdict"] == "divergent"


def test_certify_needs_delta():
    with pytest.raises(ProblemFileError):
        Problem.from_dict(OU).certify()


def test_validate_round_trip(problems_dir, tmp_path):
    problem = Problem.from_file(problems_dir / "ou.json")
    path = tmp_path / "report.json"
    write_json(path, problem.certify().to_dict())
    report = CertificateReport.from_dict(read_json(path))
    result = Problem.from_dict(report.problem).validate(report)
    assert result.reproduced
    assert result.details["accepted"]


def test_validate_detects_tampering(problems_dir):
    problem = Problem.from_file(problems_dir / "ou.json")
    report = problem.certify()
    report.constants["c"] = 0.3
    assert not problem.validate(report).reproduced


def test_report_requires_every_section():
    with pytest.raises(ProblemFileError):
        CertificateReport.from_dict({"problem": {}, "constants": {}})


SQUARE_RATES = {
    "kind": "jump",
    "birth": "(i + 1)^2",
    "death": "2 * i^2",
    "W": "1 + i",
    "c": 0.01,
    "b": 5,
    "i_range": [10, 1000],
    "i_max": 1000,
    "options": {"metric_horizon": 1000},
}


def test_jump_rejects_divergent_series(monkeypatch):
    monkeypatch.setattr(
        "lyacert.problems.jump.gaussian_series",
        lambda ch, delta, **kwargs: divergent({"tail_slope": -0.5, "delta": delta}),
    )
    problem = Problem.from_dict(SQUARE_RATES)
    delta = delta_search(0.01, 1.25).delta_star / 2
    report = problem.certify(delta=delta)
    assert report.violations == []
    assert report.oracle["gaussian_series"]["verdict"] == "divergent"
    assert not report.accepted
    assert any("Series oracle diverges" in reason for reason in report.reasons)
    assert "jump_series" in [record["name"] for record in report.provenance["discrepancies"]]
    assert problem.validate(report).reproduced
    report.certificate["accepted"] = True
    assert not problem.validate(report).reproduced
