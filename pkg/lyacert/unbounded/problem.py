from typing import Sequence, Tuple
import numpy as np
from dataclasses import dataclass
from functools import lru_cache
from cached_property import cached_property
from lyacert.expr import Constant, Expression, evaluate, gradient, hessian
from lyacert.expr.nodes import add, mul, sub
from lyacert.diffusion import DiffusionProblem, InvalidConstantsError
from lyacert.unbounded.errors import MatrixNotPositiveDefiniteError

Matrix = Tuple[Tuple[Expression, ...], ...]
HALF = Constant(0.5)


def _mirror(upper: Sequence[Sequence[Expression]], m: int) -> Matrix:
    if len(upper) != m:
        raise InvalidConstantsError(f"Diffusion matrix has {len(upper)} rows, expected m = {m}.")
    rows = []
    for i, row in enumerate(upper):
        row = tuple(row)
        if len(row) == m - i:
            row = (None,) * i + row
        elif len(row) != m:
            raise InvalidConstantsError(
                f"Row {i + 1} of the diffusion matrix has {len(row)} entries, "
                f"expected {m - i} (upper triangle) or {m}."
            )
        rows.append(row)
    return tuple(
        tuple(rows[min(i, j)][max(i, j)] for j in range(m)) for i in range(m)
    )


@lru_cache(maxsize=None)
def drift_expression(A: Matrix, V: Expression, m: int, i: int) -> Expression:
    """`b^i = (1/2) sum_j (d_j a^{ij} - a^{ij} d_j V)` for `i` in `1..m`."""
    grad_V = gradient(V, m)
    result = None
    for j in range(m):
        a = A[i - 1][j]
        term = sub(a.differentiate(j + 1), mul(a, grad_V[j]))
        result = term if result is None else add(result, term)
    return mul(HALF, result)


@lru_cache(maxsize=None)
def weighted_generator(A: Matrix, V: Expression, m: int, W: Expression) -> Expression:
    """Symbolic `L_a W = (1/2) sum_ij a^{ij} d_ij W + sum_i b^i d_i W`."""
    second = hessian(W, m)
    first = gradient(W, m)
    result = None
    for i in range(m):
        for j in range(m):
            term = mul(A[i][j], second[i][j])
            result = term if result is None else add(result, term)
    result = mul(HALF, result)
    for i in range(m):
        result = add(result, mul(drift_expression(A, V, m, i + 1), first[i]))
    return result


@dataclass(frozen=True)
class UnboundedProblem:
    """
    Diffusion `L_a` with a position-dependent symmetric matrix `A` for which
    the measure proportional to `exp(-V)` is invariant. Only the upper triangle
    of `A` is given; the lower one mirrors it.
    """

    upper: Tuple[Tuple[Expression, ...], ...]
    V: Expression
    m: int
    x0: Tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.x0) != self.m:
            raise InvalidConstantsError(
                f"Base point has {len(self.x0)} coordinates, expected m = {self.m}."
            )
        _mirror(self.upper, self.m)

    @classmethod
    def from_upper(
        cls,
        upper: Sequence[Sequence[Expression]],
        V: Expression,
        m: int,
        x0: Sequence[float] = None,
    ) -> "UnboundedProblem":
        x0 = tuple([0.0] * m) if x0 is None else tuple(float(v) for v in x0)
        return cls(tuple(tuple(row) for row in upper), V, m, x0)

    @cached_property
    def matrix(self) -> Matrix:
        return _mirror(self.upper, self.m)

    @cached_property
    def drift(self) -> Tuple[Expression, ...]:
        return tuple(
            drift_expression(self.matrix, self.V, self.m, i) for i in range(1, self.m + 1)
        )

    @cached_property
    def classical(self) -> DiffusionProblem:
        return DiffusionProblem(self.V, self.m, self.x0)

    def generator(self, W: Expression) -> Expression:
        return weighted_generator(self.matrix, self.V, self.m, W)

    def distance_sq(self, x: Sequence[float]) -> np.ndarray:
        return self.classical.distance_sq(x)

    def matrix_values(self, points: np.ndarray) -> np.ndarray:
        """`A` on a batch of points of shape `(m, n)` as an array of shape `(n, m, m)`."""
        points = np.asarray(points, dtype=float).reshape(self.m, -1)
        n = points.shape[1]
        values = np.empty((n, self.m, self.m))
        for i in range(self.m):
            for j in range(i, self.m):
                values[:, i, j] = values[:, j, i] = evaluate(self.matrix[i][j], points)
        return values

    def check_positive_definite(self, points: np.ndarray, values: np.ndarray = None) -> None:
        """Leading principal minors of `A` must be positive at every point."""
        points = np.asarray(points, dtype=float).reshape(self.m, -1)
        values = self.matrix_values(points) if values is None else values
        for order in range(1, self.m + 1):
            minors = np.linalg.det(values[:, :order, :order])
            bad = np.flatnonzero(~(minors > 0))
            if bad.size:
                raise MatrixNotPositiveDefiniteError(
                    points[:, bad[0]].tolist(), order, float(minors[bad[0]])
                )
