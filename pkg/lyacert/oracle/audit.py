from typing import Any, Dict, List, NamedTuple, Sequence, Tuple
import math
import numpy as np
import pandas as pd
from tqdm import tqdm
from loguru import logger
from lyacert.expr import Expression, evaluate, parse
from lyacert.expr.nodes import BinaryOp, Constant, FunctionCall, Variable

EPS = np.finfo(float).eps


class AuditResult(NamedTuple):
    max_relative_error: float
    order: float
    passed: bool
    details: List[Dict[str, Any]]


def finite_diff_audit(
    e: Expression,
    x: Sequence[float],
    h: float = 1e-4,
    tol: float = 1e-6,
    order_range: Tuple[float, float] = (1.9, 2.1),
) -> AuditResult:
    """
    Compare every symbolic partial derivative of `e` at `x` with central differences.

    Differences are taken with steps `h` and `h / 2`. The error is measured on the
    Richardson combination of the two, relative to `1 + |derivative|`. The observed
    order `log2(err(h) / err(h / 2))` must lie in `order_range` unless the error at
    `h / 2` is within a few multiples of the rounding noise floor, in which case the
    order is reported as NaN and not checked.
    """
    point = np.asarray(x, dtype=float).reshape(-1)
    value = evaluate(e, point)
    floor = 64 * EPS * (1 + abs(value)) / (h / 2)
    details = []
    for index in range(1, point.size + 1):
        exact = evaluate(e.differentiate(index), point)
        step = np.zeros_like(point)
        step[index - 1] = 1.0
        central = [
            (evaluate(e, point + s * step) - evaluate(e, point - s * step)) / (2 * s)
            for s in (h, h / 2)
        ]
        richardson = (4 * central[1] - central[0]) / 3
        err_h, err_half = abs(central[0] - exact), abs(central[1] - exact)
        relative = abs(richardson - exact) / (1 + abs(exact))
        order = math.log2(err_h / err_half) if err_half > 8 * floor else math.nan
        order_ok = math.isnan(order) or order_range[0] <= order <= order_range[1]
        details.append(
            {
                "index": index,
                "derivative": exact,
                "relative_error": relative,
                "order": order,
                "passed": relative <= tol and order_ok,
            }
        )
    worst = max(d["relative_error"] for d in details)
    orders = [d["order"] for d in details if not math.isnan(d["order"])]
    return AuditResult(
        max_relative_error=worst,
        order=min(orders, key=lambda o: abs(o - 2)) if orders else math.nan,
        passed=all(d["passed"] for d in details),
        details=details,
    )


def random_expression(rng: np.random.Generator, m: int, depth: int) -> Expression:
    """
    Random smooth expression over `x1..xm`.

    Only forms that are defined everywhere are generated, so every point
    of `R^m` is a valid evaluation point.
    """
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.7:
            return Variable(int(rng.integers(1, m + 1)))
        return Constant(round(float(rng.uniform(-2, 2)), 3))
    u = random_expression(rng, m, depth - 1)
    form = int(rng.integers(0, 10))
    if form < 3:
        v = random_expression(rng, m, depth - 1)
        return BinaryOp("+-*"[form], u, v)
    one = Constant(1.0)
    square = BinaryOp("^", u, Constant(2.0))
    if form == 3:
        return FunctionCall("exp", BinaryOp("/", u, BinaryOp("+", one, square)))
    if form == 4:
        return FunctionCall("log", BinaryOp("+", one, square))
    if form == 5:
        return FunctionCall("sqrt", BinaryOp("+", one, square))
    if form == 6:
        v = random_expression(rng, m, depth - 1)
        return BinaryOp("/", u, BinaryOp("+", one, BinaryOp("^", v, Constant(2.0))))
    if form == 7:
        return square
    if form == 8:
        return BinaryOp("^", u, Constant(3.0))
    return FunctionCall("neg", u)


def audit_random(
    count: int,
    seed: int,
    m: int = 2,
    depth: int = 3,
    h: float = 1e-3,
    tol: float = 1e-6,
    progress: bool = False,
) -> pd.DataFrame:
    """
    Audit `count` random expressions at random points of `[-1, 1]^m`.

    Each expression is also printed and re-parsed; the re-parsed tree must
    evaluate to the same value.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for number in tqdm(range(count), disable=not progress, desc="audit"):
        e = random_expression(rng, m, depth)
        point = rng.uniform(-1, 1, size=m)
        result = finite_diff_audit(e, point, h=h, tol=tol)
        text = str(e)
        original = evaluate(e, point)
        reparsed = evaluate(parse(text, m), point)
        round_trip = abs(original - reparsed) <= 1e-12 * (1 + abs(original))
        rows.append(
            {
                "expression": text,
                "point": point.tolist(),
                "relative_error": result.max_relative_error,
                "order": result.order,
                "round_trip": round_trip,
                "passed": result.passed and round_trip,
            }
        )
    table = pd.DataFrame(rows)
    failed = int((~table["passed"]).sum()) if count else 0
    if failed:
        logger.warning(f"Symbolic audit: {failed} of {count} expressions failed.")
    return table
