"""
Borcherds-Cartan data: validation, index classification, the symmetric
bilinear form on the root lattice and root-vector bookkeeping.
"""

import logging
from collections import deque
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from weak_quantum_algebra.exceptions import (
    DatumValidationError,
    IndexOutOfRange,
    NotApplicable,
)

logger = logging.getLogger(__name__)

MAX_RANK = 64

ViolationKind = Literal[
    "NonSquare",
    "LengthMismatch",
    "DiagonalViolation",
    "SignViolation",
    "ZeroPairViolation",
    "NotSymmetrizable",
    "NonPositiveSymmetrizer",
]


class Violation(BaseModel):
    """One failed datum condition with the offending indices."""

    model_config = ConfigDict(frozen=True)

    kind: ViolationKind
    indices: Tuple[int, ...] = ()

    def render(self) -> str:
        if not self.indices:
            return self.kind
        return f"{self.kind}({','.join(str(i) for i in self.indices)})"


class BorcherdsCartanDatum(BaseModel):
    """A symmetrizable Borcherds-Cartan matrix with its symmetrizers.

    Build instances through ``validate_datum``; the model itself does not
    re-check the matrix conditions.
    """

    model_config = ConfigDict(frozen=True)

    a: Tuple[Tuple[int, ...], ...]
    s: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.a, dtype=np.int64).reshape(self.n, self.n)

    @property
    def symmetrized(self) -> np.ndarray:
        """diag(s) * A, symmetric for a valid datum."""
        return np.diag(np.array(self.s, dtype=np.int64)) @ self.matrix

    def is_real(self, i: int) -> bool:
        return self.a[i][i] == 2

    def indices(self) -> range:
        return range(self.n)


class IndexClassification(BaseModel):
    model_config = ConfigDict(frozen=True)

    real: Tuple[int, ...]
    imaginary: Tuple[int, ...]


class RootVector(BaseModel):
    """An element of the root lattice in the simple-root basis."""

    model_config = ConfigDict(frozen=True)

    coeffs: Tuple[int, ...]

    @property
    def height(self) -> int:
        if any(c < 0 for c in self.coeffs):
            raise NotApplicable(f"height is defined on Q_+ only, got {self.coeffs}")
        return sum(self.coeffs)

    def __add__(self, other: "RootVector") -> "RootVector":
        return RootVector(coeffs=tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "RootVector") -> "RootVector":
        return RootVector(coeffs=tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))


def simple_root(d: BorcherdsCartanDatum, i: int) -> RootVector:
    _check_index(d, i)
    return RootVector(coeffs=tuple(int(k == i) for k in range(d.n)))


def check_datum(a: Sequence[Sequence[int]], s: Sequence[int]) -> List[Violation]:
    """Return every violated datum condition (empty when the datum is valid).

    A pair (i, j) is tested for symmetry only when it carries no sign or zero
    pattern violation and all symmetrizers are positive, so a single defect
    yields a single violation.
    """
    rows = [list(r) for r in a]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        return [Violation(kind="NonSquare")]
    if len(s) != n:
        return [Violation(kind="LengthMismatch")]
    if n > MAX_RANK:
        raise NotApplicable(f"index sets larger than {MAX_RANK} are not supported")

    mat = np.array(rows, dtype=np.int64)
    sym = np.array(list(s), dtype=np.int64)
    violations: List[Violation] = []

    diag = np.diag(mat)
    for i in np.flatnonzero((diag != 2) & (diag > 0)):
        violations.append(Violation(kind="DiagonalViolation", indices=(int(i),)))

    off = ~np.eye(n, dtype=bool)
    sign_bad = (mat > 0) & off
    for i, j in np.argwhere(sign_bad):
        violations.append(Violation(kind="SignViolation", indices=(int(i), int(j))))

    zero_bad = (mat == 0) & (mat.T != 0) & off
    for i, j in np.argwhere(zero_bad):
        violations.append(Violation(kind="ZeroPairViolation", indices=(int(i), int(j))))

    for i in np.flatnonzero(sym <= 0):
        violations.append(Violation(kind="NonPositiveSymmetrizer", indices=(int(i),)))

    if np.all(sym > 0):
        dirty = sign_bad | sign_bad.T | zero_bad | zero_bad.T
        sa = np.diag(sym) @ mat
        asym = (sa != sa.T) & ~dirty & np.triu(off)
        for i, j in np.argwhere(asym):
            violations.append(Violation(kind="NotSymmetrizable", indices=(int(i), int(j))))
    return violations


def validate_datum(
    a: Sequence[Sequence[int]], s: Optional[Sequence[int]] = None
) -> BorcherdsCartanDatum:
    """Validate a Borcherds-Cartan matrix and its symmetrizers.

    Args:
        a: Square integer matrix.
        s: Positive symmetrizers; defaults to all ones.

    Returns:
        The validated datum.

    Raises:
        DatumValidationError: Carrying the exhaustive list of violations.
    """
    if s is None:
        s = [1] * len(a)
    violations = check_datum(a, s)
    if violations:
        logger.debug("datum rejected: %s", [v.render() for v in violations])
        raise DatumValidationError(violations)
    return BorcherdsCartanDatum(
        a=tuple(tuple(int(x) for x in row) for row in a), s=tuple(int(x) for x in s)
    )


def classify_indices(d: BorcherdsCartanDatum) -> IndexClassification:
    real = tuple(i for i in d.indices() if d.a[i][i] == 2)
    imaginary = tuple(i for i in d.indices() if d.a[i][i] != 2)
    return IndexClassification(real=real, imaginary=imaginary)


def _check_index(d: BorcherdsCartanDatum, *indices: int) -> None:
    for i in indices:
        if not 0 <= i < d.n:
            raise IndexOutOfRange(f"index {i} outside I = {{0..{d.n - 1}}}")


def bilinear_form(d: BorcherdsCartanDatum, i: int, j: int) -> int:
    """(alpha_i | alpha_j) = s_i * a_ij."""
    _check_index(d, i, j)
    return d.s[i] * d.a[i][j]


def root_pairing(d: BorcherdsCartanDatum, beta: Sequence[int], j: int) -> int:
    """(beta | alpha_j) for beta given in the simple-root basis."""
    _check_index(d, j)
    return int(np.dot(np.asarray(beta, dtype=np.int64), d.symmetrized[:, j]))


def find_symmetrizers(a: Sequence[Sequence[int]]) -> Optional[Tuple[int, ...]]:
    """Minimal positive integer symmetrizers, or None when A is not symmetrizable.

    Each connected component of the Dynkin graph is scaled independently.

    Raises:
        NotApplicable: For more than eight indices.
    """
    n = len(a)
    if n > 8:
        raise NotApplicable("symmetrizer search is limited to n <= 8")
    ratios: List[Optional[Fraction]] = [None] * n
    result: List[int] = [0] * n
    for root in range(n):
        if ratios[root] is not None:
            continue
        ratios[root] = Fraction(1)
        component = [root]
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if i == j or (a[i][j] == 0 and a[j][i] == 0):
                    continue
                if a[i][j] == 0 or a[j][i] == 0:
                    return None
                wanted = ratios[i] * Fraction(a[i][j], a[j][i])  # type: ignore[operator]
                if wanted <= 0:
                    return None
                if ratios[j] is None:
                    ratios[j] = wanted
                    component.append(j)
                    queue.append(j)
                elif ratios[j] != wanted:
                    return None
        scale = reduce(lambda x, y: x * y // gcd(x, y), (ratios[k].denominator for k in component), 1)  # type: ignore[union-attr]
        ints = [int(ratios[k] * scale) for k in component]  # type: ignore[operator]
        common = reduce(gcd, ints)
        for k, value in zip(component, ints):
            result[k] = value // common
    return tuple(result)
