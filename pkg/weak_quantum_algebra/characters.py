"""
Truncated Borcherds-Kac-Weyl characters.

Weights are handled as drops: an integer vector beta stands for base - beta,
where base is lambda + rho in the numerator and rho in the denominator, and
rho(h_i) = 1 for every index.  Both sums are expanded in e^{-alpha}, the
denominator (constant term 1) is divided out and everything above the height
bound is discarded.
"""

import logging
import time
from collections import deque
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from weak_quantum_algebra.cartan import BorcherdsCartanDatum, classify_indices
from weak_quantum_algebra.check_catalog import anchor
from weak_quantum_algebra.exceptions import NotApplicable, TruncationTooTight
from weak_quantum_algebra.models import CheckRecord
from weak_quantum_algebra.presentation import TypeTable, build_presentation
from weak_quantum_algebra.qscalar import q_power
from weak_quantum_algebra.representations import build_highest_weight_module

logger = logging.getLogger(__name__)

Drop = Tuple[int, ...]
ReflectionWord = Tuple[int, ...]


class CharacterSeries(BaseModel):
    """Multiplicities of the weights lambda - beta with ht(beta) <= height."""

    model_config = ConfigDict(frozen=True)

    highest: Tuple[int, ...]
    height: int
    weyl_length: int
    multiplicities: Dict[Drop, int]

    def multiplicity(self, beta: Sequence[int]) -> int:
        return self.multiplicities.get(tuple(beta), 0)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"drop": str(list(beta)), "height": sum(beta), "multiplicity": mult}
            for beta, mult in sorted(self.multiplicities.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        ]
        return pd.DataFrame(rows, columns=["drop", "height", "multiplicity"])


def _reflect(a: np.ndarray, base: np.ndarray, beta: np.ndarray, i: int) -> np.ndarray:
    pairing = int(base[i] - a[i] @ beta)
    out = beta.copy()
    out[i] += pairing
    return out


def apply_weyl(d: BorcherdsCartanDatum, word: ReflectionWord, base: Sequence[int], beta: Sequence[int]) -> Drop:
    """w(base - beta) as a drop from base; the rightmost reflection acts first."""
    a = d.matrix
    b = np.asarray(base, dtype=np.int64)
    out = np.asarray(beta, dtype=np.int64)
    for i in reversed(word):
        out = _reflect(a, b, out, i)
    return tuple(int(x) for x in out)


def weyl_elements(d: BorcherdsCartanDatum, max_length: int) -> List[ReflectionWord]:
    """Reduced words of the real Weyl group up to max_length, shortest first."""
    real = classify_indices(d).real
    rho = [1] * d.n
    zero = (0,) * d.n
    seen = {zero: ()}
    order: List[ReflectionWord] = [()]
    queue = deque([()])
    while queue:
        word = queue.popleft()
        if len(word) >= max_length:
            continue
        for i in real:
            candidate = (i,) + word
            key = apply_weyl(d, candidate, rho, zero)
            if key in seen:
                continue
            seen[key] = candidate
            order.append(candidate)
            queue.append(candidate)
    return order


def perpendicular_subsets(d: BorcherdsCartanDatum, highest: Optional[Sequence[int]] = None) -> List[Tuple[int, ...]]:
    """Sets of imaginary indices with a_ij = 0 pairwise, perpendicular to lambda when given."""
    imaginary = [i for i in classify_indices(d).imaginary if highest is None or highest[i] == 0]
    subsets: List[Tuple[int, ...]] = [()]
    for size in range(1, len(imaginary) + 1):
        for subset in combinations(imaginary, size):
            if all(d.a[i][j] == 0 for i, j in combinations(subset, 2)):
                subsets.append(subset)
    return subsets


def _alternating_sum(
    d: BorcherdsCartanDatum,
    base: Sequence[int],
    subsets: Sequence[Tuple[int, ...]],
    words: Sequence[ReflectionWord],
    height: int,
) -> Dict[Drop, int]:
    terms: Dict[Drop, int] = {}
    for subset in subsets:
        start = [int(i in subset) for i in range(d.n)]
        for word in words:
            beta = apply_weyl(d, word, base, start)
            if any(b < 0 for b in beta) or sum(beta) > height:
                continue
            sign = -1 if (len(word) + len(subset)) % 2 else 1
            terms[beta] = terms.get(beta, 0) + sign
    return {beta: c for beta, c in terms.items() if c}


def _drops_up_to(n: int, height: int) -> List[Drop]:
    out: List[Drop] = []

    def grow(prefix: List[int], left: int) -> None:
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for k in range(left + 1):
            grow(prefix + [k], left - k)

    grow([], height)
    return sorted(out, key=lambda beta: (sum(beta), beta))


def _series_quotient(num: Dict[Drop, int], den: Dict[Drop, int], n: int, height: int) -> Dict[Drop, int]:
    if den.get((0,) * n) != 1:
        raise NotApplicable("denominator constant term is not 1")
    result: Dict[Drop, int] = {}
    for beta in _drops_up_to(n, height):
        value = num.get(beta, 0)
        for gamma, c in den.items():
            if not any(gamma):
                continue
            rest = tuple(b - g for b, g in zip(beta, gamma))
            if min(rest) < 0:
                continue
            value -= c * result.get(rest, 0)
        if value:
            result[beta] = value
    return result


def _character(d: BorcherdsCartanDatum, highest: Sequence[int], height: int, length: int) -> Dict[Drop, int]:
    words = weyl_elements(d, length)
    top = [n_i + 1 for n_i in highest]
    num = _alternating_sum(d, top, perpendicular_subsets(d, highest), words, height)
    den = _alternating_sum(d, [1] * d.n, perpendicular_subsets(d), words, height)
    return _series_quotient(num, den, d.n, height)


def truncated_character(
    d: BorcherdsCartanDatum, highest: Sequence[int], height: int, weyl_length: int = 6
) -> CharacterSeries:
    """Character of the simple module with lambda(h_i) = highest[i], to height N.

    Raises:
        NotApplicable: For a non-dominant lambda.
        TruncationTooTight: When Weyl words of length weyl_length + 1 would
            still change a coefficient at height <= N.
    """
    if len(highest) != d.n:
        raise NotApplicable(f"need {d.n} weight entries, got {len(highest)}")
    if any(n_i < 0 for n_i in highest):
        raise NotApplicable(f"lambda = {list(highest)} is not dominant")
    start = time.perf_counter()
    coarse = _character(d, highest, height, weyl_length)
    fine = _character(d, highest, height, weyl_length + 1)
    if coarse != fine:
        raise TruncationTooTight(
            f"Weyl length {weyl_length} is too short for height {height}"
        )
    logger.debug("character %s to height %d in %.2fs", list(highest), height, time.perf_counter() - start)
    return CharacterSeries(
        highest=tuple(highest), height=height, weyl_length=weyl_length, multiplicities=coarse
    )


def character_module_crosscheck(
    d: BorcherdsCartanDatum, highest: Sequence[int], height: int, weyl_length: int = 6
) -> List[CheckRecord]:
    """Compare the truncated character with a constructed simple module.

    The module lives in the all-type-one algebra with m = 2, unit sector,
    gamma = 1 and K_i eigenvalues q^{s_i n_i}.
    """
    if d.n > 2 or height > 8:
        raise NotApplicable("the module cross-check is limited to rank <= 2 and height <= 8")
    series = truncated_character(d, highest, height, weyl_length)
    p = build_presentation(d, TypeTable.uniform(d.n), 2)
    lam = [q_power(s_i * n_i) for s_i, n_i in zip(d.s, highest)]
    module = build_highest_weight_module(p, lam, "unit", 1, height)
    dims = module.weight_multiplicities()
    records = []
    label = ",".join(str(n_i) for n_i in highest)
    for beta in _drops_up_to(d.n, height):
        expected = series.multiplicity(beta)
        got = dims.get(beta, 0)
        records.append(
            CheckRecord.judge(
                f"character-crosscheck:[{label}]:{list(beta)}",
                anchor("character-crosscheck"),
                expected == got,
                residue="" if expected == got else f"character {expected}, module {got}",
            )
        )
    return records
