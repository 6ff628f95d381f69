from typing import Callable, Dict, Mapping, Optional, Sequence, Union
import numpy as np
from dataclasses import dataclass, field
from lyacert.expr import Expression, evaluate, parse
from lyacert.jump.errors import ChainDefinitionError

Rule = Union[Expression, Callable[[np.ndarray], np.ndarray], Sequence[float], np.ndarray]
INDEX_ALIASES = {"i": 1}


def parse_rule(text: str) -> Expression:
    """Parse a rule in the integer index, written `i` (or `x1`)."""
    return parse(text, 1, aliases=INDEX_ALIASES)


def rule_values(rule: Rule, idx: np.ndarray, name: str = "rule") -> np.ndarray:
    """Values of a rule on an integer index array."""
    idx = np.asarray(idx, dtype=np.int64)
    if isinstance(rule, Expression):
        return np.asarray(evaluate(rule, idx.astype(float).reshape(1, -1)), dtype=float)
    if callable(rule):
        return np.asarray(rule(idx), dtype=float)
    table = np.asarray(rule, dtype=float)
    if idx.size and (idx.max() >= table.size or idx.min() < 0):
        raise ChainDefinitionError(
            f"{name} is tabulated on 0..{table.size - 1}; indices up to {idx.max()} requested."
        )
    return table[idx]


@dataclass(frozen=True, eq=False)
class BirthDeathChain:
    """
    Nearest-neighbour jump process on `N` with rates `b_i` (to `i + 1`) and `d_i` (to `i - 1`).

    Rates are expressions in the index, functions of an index array or tabulated
    arrays. `birth_overrides` replaces single birth rates, e.g. `b_0 = 1` when the
    birth rule vanishes at zero. The death rate at `0` is always `0`.
    """

    birth: Rule
    death: Rule
    birth_overrides: Mapping[int, float] = field(default_factory=dict)

    @classmethod
    def from_strings(
        cls, birth: str, death: str, birth_overrides: Optional[Mapping[int, float]] = None
    ) -> "BirthDeathChain":
        overrides = {int(k): float(v) for k, v in (birth_overrides or {}).items()}
        return cls(parse_rule(birth), parse_rule(death), overrides)

    def birth_rates(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        values = np.array(rule_values(self.birth, idx, "birth"), dtype=float)
        for index, value in self.birth_overrides.items():
            values[idx == index] = value
        bad = np.flatnonzero(~(values > 0))
        if bad.size:
            raise ChainDefinitionError(
                f"Birth rate b_{idx[bad[0]]} = {values[bad[0]]!r} must be positive."
            )
        return values

    def death_rates(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        values = np.array(rule_values(self.death, idx, "death"), dtype=float)
        values[idx == 0] = 0.0
        bad = np.flatnonzero((idx >= 1) & ~(values > 0))
        if bad.size:
            raise ChainDefinitionError(
                f"Death rate d_{idx[bad[0]]} = {values[bad[0]]!r} must be positive."
            )
        return values

    def log_r(self, i_max: int) -> np.ndarray:
        """`log r_i` for `i = 0..i_max`, `r_i = (b_0 ... b_{i-1}) / (d_1 ... d_i)`."""
        births = np.log(self.birth_rates(np.arange(i_max)))
        deaths = np.log(self.death_rates(np.arange(1, i_max + 1)))
        return np.concatenate([[0.0], np.cumsum(births - deaths)])

    def rho(self, i_max: int) -> np.ndarray:
        """`rho(i, 0) = sum_{k < i} b_k^{-1/2}` for `i = 0..i_max`."""
        return np.concatenate([[0.0], np.cumsum(self.birth_rates(np.arange(i_max)) ** -0.5)])

    def describe(self) -> Dict[str, str]:
        return {
            "birth": str(self.birth) if isinstance(self.birth, Expression) else "table",
            "death": str(self.death) if isinstance(self.death, Expression) else "table",
            "birth_overrides": {str(k): v for k, v in self.birth_overrides.items()},
        }
