from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple, Type
import json
import _jsonnet
import pandas as pd
from pathlib import Path
from dataclasses import dataclass, field
from loguru import logger
from lyacert import __version__
from lyacert.expr import Expression, parse
from lyacert.diffusion import GridSpec
from lyacert.utils import collect_discrepancies
from lyacert.problems.errors import ProblemFileError

REPORT_KEYS = ("problem", "constants", "certificate", "oracle", "violations", "provenance")


@dataclass
class CertificateReport:
    """
    Result of a certification run. Every number carries its `source`:
    `problem` (given in the file), `fit`, `scan`, `formula` or `oracle`.
    `tables` hold CSV material and are not part of the JSON report.
    """

    problem: Dict[str, Any]
    constants: Dict[str, Any]
    certificate: Dict[str, Any]
    oracle: Dict[str, Any]
    violations: List[Dict[str, Any]]
    provenance: Dict[str, Any]
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return bool(self.certificate.get("accepted"))

    @property
    def reasons(self) -> List[str]:
        return list(self.certificate.get("reasons", []))

    def to_dict(self) -> Dict[str, Any]:
        return {key: getattr(self, key) for key in REPORT_KEYS}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CertificateReport":
        missing = [key for key in REPORT_KEYS if key not in data]
        if missing:
            raise ProblemFileError(f"Report misses top-level keys: {', '.join(missing)}.")
        return cls(**{key: data[key] for key in REPORT_KEYS})


class ValidationResult(NamedTuple):
    reproduced: bool
    details: Dict[str, Any]


def verdict_section(reasons: Sequence[str], payload: Dict[str, Any]) -> Dict[str, Any]:
    return {**payload, "accepted": not reasons, "reasons": list(reasons), "source": "formula"}


def violation_points(violations: Sequence[Dict[str, Any]], digits: int = 10) -> set:
    return {tuple(round(float(v), digits) for v in item["point"]) for item in violations}


class Problem:
    """
    Problem file of one `kind`. Subclasses register themselves with
    `@Problem.register(kind)` and are built with `Problem.from_dict`.

    Parameters
    ----------
    params : `Dict[str, Any]`, required
        Parsed problem file. Numerical knobs may be overridden under `"options"`.
    """

    _registry: Dict[str, Type["Problem"]] = {}
    kind: str = None
    required: Tuple[str, ...] = ()

    def __init__(self, params: Dict[str, Any]) -> None:
        self.params = params
        self.options = dict(params.get("options", {}))
        self.seed = params.get("seed")
        self.delta = params.get("delta")
        if self.delta is not None and not isinstance(self.delta, (int, float)):
            raise ProblemFileError(f"delta must be a number, got {self.delta!r}.")

    @classmethod
    def register(cls, name: str):
        def decorator(subclass: Type["Problem"]) -> Type["Problem"]:
            if name in cls._registry:
                raise ProblemFileError(f"Problem kind {name!r} is already registered.")
            subclass.kind = name
            cls._registry[name] = subclass
            return subclass

        return decorator

    @classmethod
    def by_name(cls, name: str) -> Type["Problem"]:
        if name not in cls._registry:
            known = ", ".join(sorted(cls._registry))
            raise ProblemFileError(f"Unknown problem kind {name!r}; expected one of: {known}.")
        return cls._registry[name]

    @classmethod
    def from_dict(cls, params: Dict[str, Any]) -> "Problem":
        if not isinstance(params, dict):
            raise ProblemFileError("A problem file must describe a JSON object.")
        subclass = cls.by_name(params.get("kind"))
        missing = [name for name in subclass.required if name not in params]
        if missing:
            raise ProblemFileError(
                f"Problem of kind {subclass.kind!r} misses required fields: {', '.join(missing)}."
            )
        return subclass(params)

    @classmethod
    def from_file(
        cls, path: Path, ext_vars: Optional[Dict[str, str]] = None
    ) -> "Problem":
        """Evaluate a JSON or Jsonnet problem file with external variables."""
        try:
            text = _jsonnet.evaluate_file(str(path), ext_vars=ext_vars or {})
        except RuntimeError as error:
            raise ProblemFileError(f"Cannot evaluate problem file {path}: {error}")
        try:
            params = json.loads(text)
        except json.JSONDecodeError as error:
            raise ProblemFileError(f"Problem file {path} is not valid JSON: {error}")
        logger.debug(f"Loaded problem file {path} of kind {params.get('kind')!r}.")
        return cls.from_dict(params)

    def option(self, name: str, default: Any) -> Any:
        return self.options.get(name, default)

    @property
    def m(self) -> int:
        m = self.params.get("m", 1)
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise ProblemFileError(f"Dimension m must be a positive integer, got {m!r}.")
        return m

    def x0(self, m: int) -> Tuple[float, ...]:
        x0 = self.params.get("x0", [0.0] * m)
        if not isinstance(x0, list) or len(x0) != m:
            raise ProblemFileError(f"x0 must be a list of {m} numbers, got {x0!r}.")
        return tuple(float(value) for value in x0)

    def expression(self, name: str, m: int) -> Optional[Expression]:
        """Parse the expression field `name` in dimension `m`; `None` when the field is absent."""
        text = self.params.get(name)
        if text is None:
            return None
        if not isinstance(text, str):
            raise ProblemFileError(f"Field {name!r} must be an expression string, got {text!r}.")
        return parse(text, m)

    def grid(self, m: int) -> GridSpec:
        """Grid of the file or `[-10, 10]^m` with a dimension-dependent number of nodes."""
        spec = self.params.get("grid", {})
        try:
            return GridSpec(
                lo=float(spec.get("lo", -10.0)),
                hi=float(spec.get("hi", 10.0)),
                n=int(spec.get("n", {1: 401, 2: 101}.get(m, 21))),
                avoid_kinks=bool(spec.get("avoid_kinks", False)),
            )
        except (TypeError, ValueError, AttributeError) as error:
            raise ProblemFileError(f"Invalid grid specification {spec!r}: {error}")

    def certify(
        self, delta: Optional[float] = None, seed: Optional[int] = None, progress: bool = False
    ) -> CertificateReport:
        """Run the pipeline of this kind; discrepancies logged meanwhile go to the provenance."""
        delta = self.delta if delta is None else delta
        seed = self.seed if seed is None else seed
        if delta is None:
            raise ProblemFileError("No delta given in the problem file or on the command line.")
        with collect_discrepancies() as discrepancies:
            report = self.run(float(delta), seed, progress)
        report.provenance = {
            "version": __version__,
            "kind": self.kind,
            "seed": seed,
            "delta": float(delta),
            **report.provenance,
            "discrepancies": discrepancies,
        }
        return report

    def run(self, delta: float, seed: Optional[int], progress: bool) -> CertificateReport:
        raise NotImplementedError()

    def validate(self, report: CertificateReport) -> ValidationResult:
        """Re-run the pass/fail checks behind `report` and compare the outcome."""
        raise NotImplementedError()
