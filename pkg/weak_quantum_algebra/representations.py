"""
Truncated highest-weight modules over wU_q^tau(G).

A module is spanned by normal F-words applied to a highest vector v with
K_i v = lambda_i v, D_i v = mu_i v and J v = gamma v.  Action matrices are
sympy ``DomainMatrix`` objects over Q(q).  The simple quotient is taken weight
by weight: a vector of weight lambda - beta survives iff some product of E's
carries it back to a nonzero multiple of v.
"""

import logging
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Literal, Mapping, Optional, Sequence, Tuple, Union

from sympy.polys.matrices import DomainMatrix

from weak_quantum_algebra.cartan import classify_indices
from weak_quantum_algebra.check_catalog import anchor, relation_anchor
from weak_quantum_algebra.coalgebra import GeneratorMap, apply_map
from weak_quantum_algebra.exceptions import GammaNotRoot, GatingViolation, NotApplicable, SectorMismatch
from weak_quantum_algebra.models import CheckRecord
from weak_quantum_algebra.presentation import (
    AlgebraElement,
    F,
    Generator,
    J,
    Presentation,
    Word,
    render_word,
    word_key,
)
from weak_quantum_algebra.qscalar import DOMAIN, ONE, ZERO, QScalar

logger = logging.getLogger(__name__)

Sector = Literal["unit", "null"]
Weight = Tuple[int, ...]
Scalarish = Union[QScalar, int]


def _matrix(entries: Mapping[int, Mapping[int, QScalar]], rows: int, cols: int) -> DomainMatrix:
    rep = {r: {c: v.value for c, v in row.items() if v} for r, row in entries.items()}
    return DomainMatrix({r: row for r, row in rep.items() if row}, (rows, cols), DOMAIN)


def same_matrix(a: DomainMatrix, b: DomainMatrix) -> bool:
    return bool((a.to_sparse() - b.to_sparse()).is_zero_matrix)


def matrix_entries(a: DomainMatrix) -> Dict[int, Dict[int, QScalar]]:
    """Nonzero entries as {row: {col: QScalar}}."""
    sparse = a.to_sparse().rep
    return {r: {c: QScalar(v) for c, v in row.items()} for r, row in dict(sparse).items() if row}


def render_matrix(a: DomainMatrix, labels: Optional[Sequence[str]] = None, limit: int = 6) -> str:
    """A short listing of nonzero entries, for residues."""
    pieces = []
    for r, row in sorted(matrix_entries(a).items()):
        for c, v in sorted(row.items()):
            col = labels[c] if labels and c < len(labels) else str(c)
            pieces.append(f"[{r},{col}]={v.render()}")
    if len(pieces) > limit:
        return "; ".join(pieces[:limit]) + f"; ... ({len(pieces)} entries)"
    return "; ".join(pieces)


def _weight_of(word: Word, n: int) -> Weight:
    counts = [0] * n
    for g in word:
        counts[g.index] += 1
    return tuple(counts)


def _add(vec: Dict[int, QScalar], col: int, c: QScalar) -> None:
    total = vec[col] + c if col in vec else c
    if total:
        vec[col] = total
    else:
        vec.pop(col, None)


@dataclass(eq=False)
class WeightModule:
    """Exposed part (height <= height_bound) of a truncated highest-weight module.

    The private extended matrices reach ``extra`` heights further so that every
    defining relation can be evaluated exactly on the exposed vectors.
    """

    presentation: Presentation
    basis: List[Word]
    weights: List[Weight]
    actions: Dict[Generator, DomainMatrix]
    highest_weight: Tuple[QScalar, ...]
    d_weight: Tuple[QScalar, ...]
    sector: Sector
    gamma: Optional[QScalar]
    height_bound: int
    simple: bool
    extended_basis: List[Word] = field(repr=False, default_factory=list)
    extended_actions: Dict[Generator, DomainMatrix] = field(repr=False, default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def labels(self) -> List[str]:
        return [f"{render_word(w)}*v" if w else "v" for w in self.basis]

    def matrix(self, g: Generator) -> DomainMatrix:
        if g not in self.actions:
            raise NotApplicable(f"no action for {g.render()}")
        return self.actions[g]

    def element_matrix(self, x: AlgebraElement, *, extended: bool = False) -> DomainMatrix:
        """The action of x; words act right to left on vectors."""
        actions = self.extended_actions if extended else self.actions
        size = len(self.extended_basis) if extended else self.dim
        total = DomainMatrix.zeros((size, size), DOMAIN)
        for word, c in x.terms.items():
            term = DomainMatrix.eye(size, DOMAIN)
            for g in word:
                if g.kind == "J" and self.presentation.unital:
                    continue
                term = term * actions[g]
            total = total + term.scalarmul(c.value)
        return total

    def exposed_residue(self, x: AlgebraElement) -> DomainMatrix:
        """x on the exposed vectors, computed in the extended truncation."""
        full = self.element_matrix(x, extended=True)
        size = len(self.extended_basis)
        return full.extract(list(range(size)), list(range(self.dim)))

    def weight_multiplicities(self) -> Dict[Weight, int]:
        counts: Dict[Weight, int] = defaultdict(int)
        for beta in self.weights:
            counts[beta] += 1
        return dict(counts)

    def eigenvalues(self, g: Generator) -> List[QScalar]:
        """Diagonal of a torus or J matrix in basis order."""
        entries = matrix_entries(self.matrix(g))
        return [entries.get(k, {}).get(k, ZERO) for k in range(self.dim)]


class _Evaluator:
    """Evaluate reduced words on the highest vector."""

    def __init__(
        self,
        p: Presentation,
        lam: Sequence[QScalar],
        mu: Sequence[QScalar],
        gamma: QScalar,
        sector: Sector,
        index: Dict[Word, int],
    ):
        self.p = p
        self.lam = lam
        self.mu = mu
        self.gamma = gamma
        self.sector = sector
        self.index = index
        self._type_zero = {
            g for g in p.generators() if g.kind in ("E", "F") and p.type_flag(g) == "zero"
        }

    def torus_value(self, g: Generator) -> QScalar:
        if g.kind == "K":
            return self.lam[g.index]
        if g.kind == "Kb":
            return self.lam[g.index].inverse()
        if g.kind == "D":
            return self.mu[g.index]
        return self.mu[g.index].inverse()

    def vector(self, x: AlgebraElement) -> Dict[int, QScalar]:
        out: Dict[int, QScalar] = {}
        for word, c in x.terms.items():
            self._word(word, c, out)
        return out

    def _word(self, word: Word, coeff: QScalar, out: Dict[int, QScalar]) -> None:
        letters = [g for g in word if g.kind in ("E", "F")]
        if self.sector == "null":
            if len(letters) != len(word) or any(g in self._type_zero for g in letters):
                return
            if any(g.kind == "E" for g in letters):
                return
            col = self.index.get(word)
            if col is not None:
                _add(out, col, coeff)
            return
        j_count = sum(1 for g in word if g.kind == "J")
        last_letter = max((k for k, g in enumerate(word) if g.kind in ("E", "F")), default=-1)
        inner_j = any(g.kind == "J" for g in word[: max(last_letter, 0)])
        scale = coeff * self.gamma**j_count
        if inner_j:
            stripped = tuple(g for g in word if g.kind != "J")
            for w2, c2 in self.p.reduce(AlgebraElement.word(*stripped)).terms.items():
                self._word(w2, scale * c2, out)
            return
        for g in word:
            if g.kind in ("K", "Kb", "D", "Db"):
                scale = scale * self.torus_value(g)
        if any(g.kind == "E" for g in letters):
            return
        col = self.index.get(tuple(letters))
        if col is not None:
            _add(out, col, scale)


def normal_f_words(p: Presentation, height: int, letters: Sequence[Generator]) -> List[Word]:
    """Normal words in the given F letters, by height then degree-lex order."""
    words: List[Word] = [()]
    frontier: List[Word] = [()]
    for _ in range(height):
        grown = []
        for w in frontier:
            for g in letters:
                candidate = w + (g,)
                if p.is_normal_letters(candidate):
                    grown.append(candidate)
        grown.sort(key=word_key)
        words.extend(grown)
        frontier = grown
    return words


def _check_sector(p: Presentation, lam: Sequence[QScalar], sector: Sector, gamma: Optional[Scalarish]) -> Optional[QScalar]:
    if sector == "unit":
        zeros = [i for i, value in enumerate(lam) if not value]
        if zeros:
            raise SectorMismatch(f"unit sector needs lambda_i != 0, zero at {zeros}")
        g = QScalar.coerce(gamma if gamma is not None else 1)
        if p.unital:
            if g != 1:
                raise GammaNotRoot("J = 1 in the ordinary quantum group")
            return g
        if g not in (ONE, QScalar.from_int(-1)) or g ** (p.m - 1) != 1:
            raise GammaNotRoot(f"gamma = {g.render()} is not a rational {p.m - 1}-th root of unity")
        return g
    if sector == "null":
        nonzero = [i for i, value in enumerate(lam) if value]
        if nonzero:
            raise SectorMismatch(f"null sector needs lambda_i = 0, nonzero at {nonzero}")
        return None
    raise NotApplicable(f"unknown sector {sector!r}")


def build_highest_weight_module(
    p: Presentation,
    lam: Sequence[Scalarish],
    sector: Sector = "unit",
    gamma: Optional[Scalarish] = None,
    height: int = 6,
    *,
    mu: Optional[Sequence[Scalarish]] = None,
    simple: bool = True,
) -> WeightModule:
    """Build the truncation of the highest-weight module of weight lambda.

    Args:
        p: Presentation acted on.
        lam: K_i eigenvalues on the highest vector.
        sector: ``unit`` (J^{m-1} = 1, J = gamma) or ``null`` (J^{m-1} = 0).
        gamma: J eigenvalue in the unit sector, 1 or -1.
        height: Exposed height bound N.
        mu: D_i eigenvalues, default all 1.
        simple: Quotient by the radical; ``False`` keeps the Verma-style truncation.

    Raises:
        SectorMismatch: When lambda is inconsistent with the sector.
        GammaNotRoot: When gamma is not a rational (m-1)-th root of unity.
    """
    n = p.n
    if len(lam) != n:
        raise NotApplicable(f"need {n} highest-weight eigenvalues, got {len(lam)}")
    lam_q = tuple(QScalar.coerce(x) for x in lam)
    mu_q = tuple(QScalar.coerce(x) for x in (mu or [1] * n))
    gamma_q = _check_sector(p, lam_q, sector, gamma)
    if sector == "null":
        simple_letters = [F(i) for i in range(n) if p.type_flag(F(i)) == "one"]
    else:
        simple_letters = [F(i) for i in range(n)]

    extra = p.max_f_letters()
    top = height + extra
    words = normal_f_words(p, top, simple_letters)
    index = {w: k for k, w in enumerate(words)}
    size = len(words)
    evaluator = _Evaluator(p, lam_q, mu_q, gamma_q or ZERO, sector, index)
    start = time.perf_counter()

    full: Dict[Generator, DomainMatrix] = {}
    for g in p.generators():
        entries: Dict[int, Dict[int, QScalar]] = defaultdict(dict)
        for col, w in enumerate(words):
            image = evaluator.vector(p.reduce(AlgebraElement.word(g, *w)))
            for row, c in image.items():
                entries[row][col] = c
        full[g] = _matrix(entries, size, size)

    weights = [_weight_of(w, n) for w in words]
    if simple:
        projection, reps = _radical_quotient(p, words, weights, full)
        ext_words = [words[k] for k in reps]
        ext_actions = {g: projection * m.extract(list(range(size)), reps) for g, m in full.items()}
    else:
        ext_words = list(words)
        ext_actions = full

    exposed = [k for k, w in enumerate(ext_words) if len(w) <= height]
    dim = len(exposed)
    actions = {g: m.extract(exposed, exposed) for g, m in ext_actions.items()}
    module = WeightModule(
        presentation=p,
        basis=[ext_words[k] for k in exposed],
        weights=[_weight_of(ext_words[k], n) for k in exposed],
        actions=actions,
        highest_weight=lam_q,
        d_weight=mu_q,
        sector=sector,
        gamma=gamma_q,
        height_bound=height,
        simple=simple,
        extended_basis=ext_words,
        extended_actions=ext_actions,
    )
    logger.info(
        "module %s sector, dim %d (height <= %d, %d extended) in %.2fs",
        sector,
        dim,
        height,
        len(ext_words),
        time.perf_counter() - start,
    )
    return module


def _radical_quotient(
    p: Presentation,
    words: List[Word],
    weights: List[Weight],
    full: Dict[Generator, DomainMatrix],
) -> Tuple[DomainMatrix, List[int]]:
    """Projection onto the simple quotient and the representative columns."""
    by_weight: Dict[Weight, List[int]] = defaultdict(list)
    for k, beta in enumerate(weights):
        by_weight[beta].append(k)
    order = sorted(by_weight, key=lambda beta: (sum(beta), beta))
    proj: Dict[Weight, DomainMatrix] = {}
    reps: Dict[Weight, List[int]] = {}
    for beta in order:
        idx = by_weight[beta]
        if sum(beta) == 0:
            proj[beta] = DomainMatrix.eye(1, DOMAIN)
            reps[beta] = list(idx)
            continue
        blocks = []
        for i in range(p.n):
            lower = tuple(b - int(k == i) for k, b in enumerate(beta))
            if lower not in proj or not reps[lower]:
                continue
            e_block = full[Generator("E", i)].extract(by_weight[lower], idx)
            blocks.append(proj[lower] * e_block)
        if not blocks:
            proj[beta] = DomainMatrix.zeros((0, len(idx)), DOMAIN)
            reps[beta] = []
            continue
        stacked = blocks[0].vstack(*blocks[1:]) if len(blocks) > 1 else blocks[0]
        reduced, pivots = stacked.rref()
        reduced = reduced.to_sparse()
        rank = len(pivots)
        proj[beta] = reduced.extract(list(range(rank)), list(range(len(idx))))
        reps[beta] = [idx[c] for c in pivots]

    columns: List[int] = []
    entries: Dict[int, Dict[int, QScalar]] = defaultdict(dict)
    row = 0
    for beta in order:
        local = matrix_entries(proj[beta]) if reps[beta] else {}
        for k in range(len(reps[beta])):
            for c, v in local.get(k, {}).items():
                entries[row + k][by_weight[beta][c]] = v
        columns.extend(reps[beta])
        row += len(reps[beta])
    return _matrix(entries, row, len(words)), columns


# checks ----------------------------------------------------------------


def verify_module_relations(module: WeightModule, label: str = "module") -> List[CheckRecord]:
    """Every defining relation acts as zero on every exposed vector."""
    records = []
    for rule in module.presentation.defining_relations():
        start = time.perf_counter()
        residue = module.exposed_residue(rule.residue())
        ok = residue.is_zero_matrix
        records.append(
            CheckRecord.judge(
                f"{label}:relation:{rule.name}",
                relation_anchor(rule.family),
                ok,
                residue="" if ok else render_matrix(residue, module.labels()),
                seconds=time.perf_counter() - start,
            )
        )
    return records


def sector_check(module: WeightModule, label: str = "module") -> List[CheckRecord]:
    """J^{m-1} is the identity or zero, and Kb_i inverts K_i on the highest vector."""
    p = module.presentation
    dim = module.dim
    ident = DomainMatrix.eye(dim, DOMAIN)
    zero = DomainMatrix.zeros((dim, dim), DOMAIN)
    w = module.element_matrix(p.idempotent())
    expected = ident if module.sector == "unit" else zero
    records = [
        CheckRecord.judge(
            f"{label}:sector:idempotent",
            anchor("sector"),
            same_matrix(w, expected),
            residue="" if same_matrix(w, expected) else render_matrix(w - expected, module.labels()),
        ),
        CheckRecord.judge(f"{label}:sector:idempotent-squared", anchor("sector"), same_matrix(w * w, w)),
    ]
    for i in range(p.n):
        k = module.matrix(Generator("K", i))
        kb = module.matrix(Generator("Kb", i))
        lam = module.highest_weight[i]
        top = module.eigenvalues(Generator("Kb", i))[0] if dim else ZERO
        wanted = lam.inverse() if lam else ZERO
        records.append(
            CheckRecord.judge(
                f"{label}:sector:Kb{i}-eigenvalue",
                anchor("sector"),
                top == wanted,
                residue="" if top == wanted else f"Kb{i} v = {top.render()} v",
            )
        )
        if module.sector == "unit":
            ok = same_matrix(k * kb, ident) and same_matrix(kb * k, ident)
        else:
            ok = k.is_zero_matrix and kb.is_zero_matrix
        records.append(CheckRecord.judge(f"{label}:sector:K{i}-Kb{i}", anchor("sector"), ok))
    if module.sector == "unit" and not p.unital and module.gamma is not None:
        j = module.matrix(J)
        ok = same_matrix(j, ident.scalarmul(module.gamma.value))
        records.append(CheckRecord.judge(f"{label}:sector:gamma", anchor("sector"), ok))
    return records


def averaging_idempotent(p: Presentation) -> AlgebraElement:
    """e = (1/(m-1)) sum_{r=1}^{m-1} J^r."""
    if p.unital:
        return AlgebraElement.one()
    weight = ONE / (p.m - 1)
    e = AlgebraElement.zero()
    for r in range(1, p.m):
        e = e + AlgebraElement.word(*(J,) * r, coeff=weight)
    return e


def averaging_action(module: WeightModule, label: str = "module") -> CheckRecord:
    """e acts as 1 when gamma = 1 and as 0 when gamma is a primitive root."""
    e = module.element_matrix(averaging_idempotent(module.presentation))
    dim = module.dim
    if module.sector == "null" or (module.gamma is not None and module.gamma != 1):
        expected = DomainMatrix.zeros((dim, dim), DOMAIN)
    else:
        expected = DomainMatrix.eye(dim, DOMAIN)
    return CheckRecord.judge(
        f"{label}:averaging-action",
        anchor("averaging-action"),
        same_matrix(e, expected),
        residue="" if same_matrix(e, expected) else render_matrix(e - expected, module.labels()),
    )


def averaging_commutes(module: WeightModule) -> bool:
    """(F_i e - e F_i)V = (E_i e - e E_i)V = 0 on the exposed vectors."""
    p = module.presentation
    e = averaging_idempotent(p)
    for i in range(p.n):
        for g in (Generator("E", i), Generator("F", i)):
            x = AlgebraElement.word(g).concat(e) - e.concat(AlgebraElement.word(g))
            if not module.exposed_residue(x).is_zero_matrix:
                return False
    return True


# one-dimensional w-bar modules ------------------------------------------


def onedim_gating(p: Presentation) -> bool:
    """a_ij = 0 for every real i whose E_i or F_i is of type one."""
    real = set(classify_indices(p.datum).real)
    typed_one = {
        i for i in range(p.n) if p.type_flag(Generator("E", i)) == "one" or p.type_flag(Generator("F", i)) == "one"
    }
    for i in real & typed_one:
        if any(p.datum.a[i][j] != 0 for j in range(p.n)):
            return False
    return True


def onedim_wbar_modules(
    p: Presentation,
    x_scalars: Optional[Mapping[int, Scalarish]] = None,
    y_scalars: Optional[Mapping[int, Scalarish]] = None,
) -> List[CheckRecord]:
    """Check the one-dimensional w-bar module X_i -> a_i, Y_j -> b_j.

    X_i and Y_j are the w-bar parts of type-one E_i and F_j; every torus
    generator, J and every type-zero E/F acts as 0.

    Raises:
        GatingViolation: When some type-one real index has a_ij != 0.
    """
    if p.unital:
        raise NotApplicable("the ordinary quantum group has no w-bar component")
    if not onedim_gating(p):
        raise GatingViolation("a_ij != 0 for a real index with a type-one E_i or F_i")
    images: Dict[Generator, QScalar] = {}
    for g in p.generators():
        value = ZERO
        if g.kind == "E" and p.type_flag(g) == "one":
            value = QScalar.coerce((x_scalars or {}).get(g.index, 1))
        elif g.kind == "F" and p.type_flag(g) == "one":
            value = QScalar.coerce((y_scalars or {}).get(g.index, 1))
        images[g] = value
    rho = GeneratorMap(name="onedim-wbar", images=images, codomain="scalar", legs=0)
    records = []
    for rule in p.defining_relations():
        value = apply_map(p, rho, rule.residue())
        assert isinstance(value, QScalar)
        records.append(
            CheckRecord.judge(
                f"onedim-wbar:{rule.name}",
                relation_anchor(rule.family),
                not value,
                residue="" if not value else value.render(),
            )
        )
    return records
