from typing import Sequence
from lyacert.errors import CertificationError


class MatrixNotPositiveDefiniteError(CertificationError):
    def __init__(self, point: Sequence[float], order: int, minor: float) -> None:
        super().__init__(
            f"Diffusion matrix is not positive definite at x = {list(point)}: "
            f"leading minor of order {order} equals {minor!r}."
        )
        self.point = list(point)
        self.order = order


class DivergentWeightError(CertificationError):
    """`mu(lambda_max)` is not finite."""

    pass
