from typing import Any, Dict, NamedTuple, Sequence, Tuple
import numpy as np
from dataclasses import dataclass
from functools import lru_cache
from lyacert.expr import Expression, gradient, laplacian
from lyacert.expr.nodes import add, mul, sub
from lyacert.diffusion.errors import InvalidConstantsError


@dataclass(frozen=True)
class LyapunovConstants:
    c: float
    b: float

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise InvalidConstantsError(f"Lyapunov constant c = {self.c!r} must be positive.")
        if not self.b >= 0:
            raise InvalidConstantsError(f"Lyapunov constant b = {self.b!r} must be non-negative.")


@dataclass(frozen=True)
class WeakLyapunovConstants:
    c_prime: float
    b_prime: float
    R: float

    def __post_init__(self) -> None:
        if not self.c_prime > 0 or not self.R > 0:
            raise InvalidConstantsError(
                f"Weak constants need c' > 0 and R > 0, got c' = {self.c_prime!r}, R = {self.R!r}."
            )


class GridSpec(NamedTuple):
    """
    Tensor grid `[lo, hi]^m` with `n` nodes per axis.

    With `avoid_kinks` every node is shifted by half a step so that
    the grid misses `x0` and the axes of `|x - x0|`-type expressions.
    """

    lo: float
    hi: float
    n: int
    avoid_kinks: bool = False

    def axis(self) -> np.ndarray:
        nodes = np.linspace(self.lo, self.hi, self.n)
        if self.avoid_kinks and self.n > 1:
            nodes = nodes + (self.hi - self.lo) / (self.n - 1) / 2
        return nodes

    def points(self, m: int) -> np.ndarray:
        axes = np.meshgrid(*([self.axis()] * m), indexing="ij")
        return np.stack([axis.reshape(-1) for axis in axes])

    def to_dict(self) -> Dict[str, Any]:
        return self._asdict()


@lru_cache(maxsize=None)
def diffusion_generator(V: Expression, m: int, W: Expression) -> Expression:
    """Symbolic `LW = Laplacian(W) - grad(V) . grad(W)`."""
    result = laplacian(W, m)
    for dV, dW in zip(gradient(V, m), gradient(W, m)):
        result = sub(result, mul(dV, dW))
    return result


@lru_cache(maxsize=None)
def u_form(V: Expression, m: int, U: Expression) -> Expression:
    """Symbolic `LU + |grad U|^2`."""
    result = diffusion_generator(V, m, U)
    for dU in gradient(U, m):
        result = add(result, mul(dU, dU))
    return result


@dataclass(frozen=True)
class DiffusionProblem:
    """
    Symmetric diffusion `L = Laplacian - grad(V) . grad` on `R^m` with invariant
    measure proportional to `exp(-V)` and distance `d(x, x0) = |x - x0|`.
    """

    V: Expression
    m: int
    x0: Tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.x0) != self.m:
            raise InvalidConstantsError(
                f"Base point has {len(self.x0)} coordinates, expected m = {self.m}."
            )

    @classmethod
    def at_origin(cls, V: Expression, m: int) -> "DiffusionProblem":
        return cls(V, m, tuple([0.0] * m))

    def generator(self, W: Expression) -> Expression:
        return diffusion_generator(self.V, self.m, W)

    def distance_sq(self, x: Sequence[float]) -> np.ndarray:
        points = np.asarray(x, dtype=float)
        center = np.asarray(self.x0, dtype=float)
        if points.ndim == 1:
            return float(np.sum((points - center) ** 2))
        return np.sum((points - center[:, None]) ** 2, axis=0)
