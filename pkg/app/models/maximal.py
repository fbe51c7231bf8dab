from dataclasses import dataclass, field
import bisect

from app.core.numeric import Number
from app.models.profiles import MonotoneProfile
from app.models.tree import StepFunction


@dataclass(frozen=True, slots=True)
class LevelDistribution:
    """
    Распределение M_T φ: различные значения по возрастанию
    и для каждого j мера и масса φ на множестве {M_T φ >= levels[j]}.

    tail_measure и tail_mass на один элемент длиннее levels (последний: 0).
    """
    levels: tuple[Number, ...]
    tail_measure: tuple[Number, ...]
    tail_mass: tuple[Number, ...]

    def above(self, lam: Number, strict: bool = True) -> tuple[Number, Number]:
        """(μ, ∫φ) по {M_T φ > λ} (strict) или {M_T φ >= λ}"""
        index = bisect.bisect_right(self.levels, lam) if strict else bisect.bisect_left(self.levels, lam)
        return self.tail_measure[index], self.tail_mass[index]

    def rearranged(self) -> MonotoneProfile:
        """(M_T φ)*: уровни по убыванию, точка разбиения после уровня j равна μ({M >= λ_j})"""
        count = len(self.levels)
        breakpoints = [0, *(self.tail_measure[j] for j in range(count - 1, -1, -1))]
        if isinstance(breakpoints[-1], float):
            breakpoints[-1] = 1.0
        return MonotoneProfile(tuple(breakpoints), tuple(reversed(self.levels)))


@dataclass(frozen=True, slots=True)
class MaximalResult:
    """M_T φ по листьям и уровень предка, на котором достигается максимум"""
    source: StepFunction
    maximal: StepFunction
    argmax_levels: tuple[int, ...]
    mass: Number
    distribution: LevelDistribution
    _powers: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def powered(self, exponent: float) -> tuple[float, ...]:
        """(M_T φ)^e по листьям во float; кешируется по показателю"""
        if exponent not in self._powers:
            self._powers[exponent] = tuple(
                0.0 if m == 0 else m**exponent for m in self.maximal.float_values
            )
        return self._powers[exponent]
