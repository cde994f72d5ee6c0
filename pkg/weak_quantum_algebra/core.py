"""
Weak Quantum Algebra Core

Loads an engine configuration, builds the presentation it describes and runs
the verification suites over it.
"""

import json
import logging
import os
import time
from functools import cached_property
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Tuple, Union

import numpy as np
from dotenv import load_dotenv
from pydantic import ValidationError

from weak_quantum_algebra.characters import character_module_crosscheck
from weak_quantum_algebra.check_catalog import anchor
from weak_quantum_algebra.coalgebra import (
    GeneratorMap,
    standard_coproduct,
    standard_counit,
    verify_coalgebra_axioms,
    verify_morphism_on_relations,
)
from weak_quantum_algebra.exceptions import (
    ConfigError,
    GatingViolation,
    NotApplicable,
    SuiteError,
    TruncationTooTight,
    WeakQuantumError,
)
from weak_quantum_algebra.models import SUITES, CheckRecord, EngineConfig, SuiteReport
from weak_quantum_algebra.presentation import (
    J,
    AlgebraElement,
    Presentation,
    TypeTable,
    build_presentation,
    quantum_group_presentation,
)
from weak_quantum_algebra.qscalar import Q, QScalar, q_power
from weak_quantum_algebra.representations import (
    averaging_action,
    averaging_commutes,
    build_highest_weight_module,
    onedim_gating,
    onedim_wbar_modules,
    sector_check,
    verify_module_relations,
)
from weak_quantum_algebra.weakhopf import (
    automorphism_exponents,
    check_weak_axioms,
    convolution_associativity,
    convolve,
    counit_convolution_unit,
    enumerate_grouplikes,
    find_inverse_exponent,
    grouplike_ansatz,
    grouplike_closure,
    identity_map,
    is_grouplike,
    j_power,
    phi_r_spec,
    phi_s_spec,
    psi_phi_specs,
    quotient_spec,
    random_words,
    standard_antipode,
    subalgebra_exponents,
    subalgebra_exponents_by_reduction,
    uniform_test_elements,
    verify_coproduct_compatibility,
    verify_morphism,
    verify_sub_bialgebra_iso,
    weak_hopf_gate,
)

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

ENV_KEYS = ("WQA_BUDGET", "WQA_MAX_WORD_LENGTH")


def load_config(path: Union[str, Path]) -> EngineConfig:
    """Read and validate a JSON engine configuration.

    Raises:
        ConfigError: ``io`` when the file cannot be read, ``parse`` for
            malformed JSON, ``validation`` for a schema or datum violation.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("io", f"cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("parse", f"{path}: {exc}") from exc
    try:
        return EngineConfig.model_validate(raw)
    except ValidationError as exc:
        messages = "; ".join(err["msg"] for err in exc.errors())
        raise ConfigError("validation", messages, detail=exc.errors()) from exc


def validate_environment() -> Dict[str, int]:
    """Return the reduction ceilings set through the environment.

    Raises:
        ConfigError: When one of them is not a positive integer.
    """
    found: Dict[str, int] = {}
    for key in ENV_KEYS:
        raw = os.getenv(key)
        if raw is None:
            continue
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError("validation", f"{key} must be an integer, got {raw!r}") from None
        if value <= 0:
            raise ConfigError("validation", f"{key} must be positive, got {value}")
        found[key] = value
    return found


def _unique(records: Iterable[CheckRecord]) -> List[CheckRecord]:
    seen: Dict[str, CheckRecord] = {}
    for record in records:
        seen.setdefault(record.check_id, record)
    return list(seen.values())


class VerificationEngine:
    """
    Runs the verification suites for one configuration.

    The presentation and the structure maps are built on first use and shared
    by every suite.
    """

    def __init__(self, config: EngineConfig):
        self.config = config
        self.datum = config.datum()
        e, f = config.type_flags()
        self.tau = TypeTable(e=e, f=f)
        self._suites: Dict[str, Callable[[], List[CheckRecord]]] = {
            "datum": self._datum,
            "bialgebra": self._bialgebra,
            "weak-antipode": self._weak_antipode,
            "gate": self._gate,
            "subalgebras": self._subalgebras,
            "grouplikes": self._grouplikes,
            "morphisms": self._morphisms,
            "modules": self._modules,
            "characters": self._characters,
        }

    @cached_property
    def presentation(self) -> Presentation:
        return build_presentation(
            self.datum,
            self.tau,
            self.config.m,
            max_word_length=self.config.truncation.max_word_length,
        )

    @cached_property
    def unital(self) -> Presentation:
        return quantum_group_presentation(
            self.datum, max_word_length=self.config.truncation.max_word_length
        )

    @cached_property
    def delta(self) -> GeneratorMap:
        return standard_coproduct(self.presentation)

    @cached_property
    def eps(self) -> GeneratorMap:
        return standard_counit(self.presentation)

    @cached_property
    def antipode(self) -> GeneratorMap:
        return standard_antipode(self.presentation)

    def run_suite(self, suite: str) -> SuiteReport:
        """Run one suite, or every configured suite merged for ``all``.

        Raises:
            NotApplicable: For an unknown suite name.
            SuiteError: When a check aborts instead of producing a record.
        """
        if suite == "all":
            records = []
            for name in self.config.selected_suites():
                report = self.run_suite(name)
                records.extend(
                    r.model_copy(update={"check_id": f"{name}/{r.check_id}"}) for r in report.records
                )
            return SuiteReport(suite="all", records=records)
        if suite not in self._suites:
            raise NotApplicable(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
        start = time.perf_counter()
        try:
            records = _unique(self._suites[suite]())
        except WeakQuantumError as exc:
            logger.error("suite %s aborted: %s", suite, exc)
            raise SuiteError(suite, exc) from exc
        report = SuiteReport(suite=suite, records=records)
        logger.info(
            "suite %s: %s in %.2fs", suite, report.counts, time.perf_counter() - start
        )
        families: Dict[str, Dict[str, int]] = {}
        for record in report.records:
            family = families.setdefault(record.check_id.split(":")[0], {})
            family[record.status] = family.get(record.status, 0) + 1
        for family_name, counts in families.items():
            logger.info("%s/%s: %s", suite, family_name, counts)
        for record in report.failures():
            logger.warning("%s: unexpected %s %s", suite, record.status, record.check_id)
        return report

    # suites -------------------------------------------------------------

    def _datum(self) -> List[CheckRecord]:
        p = self.presentation
        sym = self.datum.symmetrized
        records = [
            CheckRecord.judge("datum:valid", anchor("datum-valid"), True),
            CheckRecord.judge(
                "datum:form-symmetry", anchor("datum-form-symmetry"), bool(np.array_equal(sym, sym.T))
            ),
        ]
        samples = uniform_test_elements(p) + random_words(p, min(self.config.random_words, 20), self.config.seed)
        samples += [(f"relation:{rule.name}", rule.residue()) for rule in p.defining_relations()]
        for label, x in samples:
            once = p.reduce(x)
            twice = p.reduce(AlgebraElement(once.terms))
            records.append(
                CheckRecord.judge(f"reduction-idempotence:{label}", anchor("reduction-idempotence"), once == twice)
            )

        w = p.idempotent()
        records.append(CheckRecord.judge("centrality:idempotent", anchor("centrality"), p.equal(w.concat(w), w)))
        for g in p.generators():
            x = AlgebraElement.word(g)
            residue = p.reduce(w.concat(x) - x.concat(w))
            records.append(
                CheckRecord.judge(
                    f"centrality:{g.render()}",
                    anchor("centrality"),
                    residue.is_empty(),
                    residue=residue.render() if not residue.is_empty() else "",
                )
            )

        for i in range(p.n):
            for j in range(p.n):
                if i == j or not self.datum.is_real(i) or self.datum.a[i][j] == 0:
                    continue
                for side in ("E", "F"):
                    residue = p.reduce(p.serre_element(i, j, side))
                    records.append(
                        CheckRecord.judge(
                            f"serre:{side}:{i},{j}",
                            anchor("serre-reduces"),
                            residue.is_empty(),
                            residue=residue.render() if not residue.is_empty() else "",
                        )
                    )

        for label, x in random_words(p, min(self.config.random_words, 20), self.config.seed + 1):
            w_part, wbar_part = p.peirce_decompose(x)
            ok = (
                p.equal(w_part + wbar_part, x)
                and p.equal(w_part.concat(w), w_part)
                and p.is_zero(wbar_part.concat(w))
            )
            records.append(CheckRecord.judge(f"peirce:{label}", anchor("peirce"), ok))
        return records

    def _bialgebra(self) -> List[CheckRecord]:
        p = self.presentation
        records = verify_morphism_on_relations(p, self.delta)
        records += verify_morphism_on_relations(p, self.eps)
        records += verify_morphism_on_relations(p, self.antipode)
        records += verify_coalgebra_axioms(p, self.delta, self.eps)
        return records

    def _weak_antipode(self) -> List[CheckRecord]:
        p = self.presentation
        ident = identity_map(p)
        records = check_weak_axioms(
            p,
            self.delta,
            self.antipode,
            random_count=self.config.random_words,
            seed=self.config.seed,
        )
        records += convolution_associativity(p, self.delta, [ident, self.antipode, ident], "id-T-id")
        records += counit_convolution_unit(p, self.delta, self.eps)
        return records

    def _gate(self) -> List[CheckRecord]:
        p = self.presentation
        bare_j = AlgebraElement.word(J)
        records = check_weak_axioms(p, self.delta, self.antipode, elements=[("J", bare_j)])
        passed = all(r.status in ("pass", "xpass") for r in records)
        records.append(
            CheckRecord.judge(
                "weak-gate:prediction",
                anchor("weak-gate"),
                passed == weak_hopf_gate(p),
                residue="" if passed == weak_hopf_gate(p) else f"bare J passes = {passed} at m = {p.m}",
            )
        )
        ident = identity_map(p)
        residue = p.reduce(convolve(p, self.delta, [ident, self.antipode, ident], bare_j) - bare_j)
        expected = p.reduce(j_power(p, 3) - bare_j)
        records.append(
            CheckRecord.judge(
                "weak-gate:residue",
                anchor("weak-gate"),
                residue == expected,
                residue="" if residue == expected else residue.render(),
            )
        )
        return records

    def _subalgebras(self) -> List[CheckRecord]:
        p = self.presentation
        if p.m < 4:
            return [
                CheckRecord.skipped(
                    "subalgebra-exponents", anchor("subalgebra-exponents"), f"needs m >= 4, got {p.m}"
                )
            ]
        predicted = subalgebra_exponents(p.m)
        found = subalgebra_exponents_by_reduction(p)
        records = [
            CheckRecord.judge(
                "subalgebra-exponents",
                anchor("subalgebra-exponents"),
                predicted == found,
                residue="" if predicted == found else f"predicted {sorted(predicted)}, reduced {sorted(found)}",
            )
        ]
        for r in sorted(predicted):
            records += verify_sub_bialgebra_iso(p, r)
        return records

    def _grouplikes(self) -> List[CheckRecord]:
        p = self.presentation
        found = enumerate_grouplikes(p, self.delta, self.eps, self.config.grouplike_length)
        records = [
            CheckRecord.judge(f"grouplike:{x.render()}", anchor("grouplike"), is_grouplike(p, self.delta, self.eps, x))
            for x in found
        ]
        records += grouplike_closure(p, self.delta, self.eps, found)
        complement = AlgebraElement.one() - p.idempotent()
        records.append(
            CheckRecord.judge(
                "grouplike:rejects:1-J^(m-1)",
                anchor("grouplike"),
                not is_grouplike(p, self.delta, self.eps, complement),
            )
        )
        for label, k in (("1", QScalar.from_int(1)), ("q", Q), ("2", QScalar.from_int(2))):
            x = grouplike_ansatz(p, k)
            expect = k == 1
            records.append(
                CheckRecord.judge(
                    f"grouplike-ansatz:k={label}",
                    anchor("grouplike-ansatz"),
                    is_grouplike(p, self.delta, self.eps, x) == expect,
                )
            )
        return records

    def _morphisms(self) -> List[CheckRecord]:
        p = self.presentation
        records = verify_morphism(p, quotient_spec(p, self.unital))
        psi, phi = psi_phi_specs(p, self.unital)
        records += verify_morphism(self.unital, psi)
        records += verify_morphism_on_relations(p, phi.as_map(), prefix=phi.name)

        table = automorphism_exponents(p.m)
        for r in range(1, p.m):
            spec = phi_r_spec(p, r)
            found = find_inverse_exponent(p, r)
            records.append(
                CheckRecord.judge(
                    f"phi-r-inverse:r={r}",
                    anchor("phi-r-inverse"),
                    (found is None) == (table[r] is None),
                    residue="" if (found is None) == (table[r] is None) else f"reduction gives s = {found}",
                )
            )
            records += verify_morphism(p, spec)
            records += verify_coproduct_compatibility(p, self.delta, spec)
        for s in range(2, p.m - 1):
            records += verify_morphism(p, phi_s_spec(p, s))
        return records

    def _module_weights(self) -> List[Tuple[int, ...]]:
        n = self.datum.n
        return [(0,) * n, (1,) * n]

    def _modules(self) -> List[CheckRecord]:
        p = self.presentation
        height = self.config.truncation.module_height
        gammas = [1]
        if p.m > 2 and (p.m - 1) % 2 == 0:
            gammas.append(-1)
        built = []
        for weights in self._module_weights():
            lam = [q_power(s * k) for s, k in zip(self.datum.s, weights)]
            for gamma in gammas:
                label = f"module[unit,n={','.join(map(str, weights))},gamma={gamma}]"
                built.append((label, build_highest_weight_module(p, lam, "unit", gamma, height)))
        built.append(("module[null]", build_highest_weight_module(p, [0] * p.n, "null", None, height)))

        records: List[CheckRecord] = []
        for label, module in built:
            records += verify_module_relations(module, label)
            records += sector_check(module, label)
            records.append(averaging_action(module, label))
            records.append(
                CheckRecord.judge(f"{label}:averaging-commutes", anchor("averaging-commutes"), averaging_commutes(module))
            )

        if onedim_gating(p):
            records += onedim_wbar_modules(p)
        else:
            try:
                onedim_wbar_modules(p)
                raised = False
            except GatingViolation:
                raised = True
            records.append(CheckRecord.judge("onedim-wbar:gating", anchor("onedim-wbar"), raised))
        return records

    def _characters(self) -> List[CheckRecord]:
        n = self.datum.n
        if n > 2:
            return [CheckRecord.skipped("character-crosscheck", anchor("character-crosscheck"), "rank above 2")]
        height = min(self.config.truncation.module_height, 8)
        weights = set(self._module_weights())
        weights.add(tuple(int(i == 0) for i in range(n)))
        records: List[CheckRecord] = []
        for highest in sorted(weights):
            try:
                records += character_module_crosscheck(
                    self.datum, highest, height, self.config.truncation.weyl_length
                )
            except TruncationTooTight as exc:
                label = ",".join(map(str, highest))
                records.append(
                    CheckRecord.judge(
                        f"character-crosscheck:[{label}]:weyl-length",
                        anchor("character-crosscheck"),
                        False,
                        residue=str(exc),
                    )
                )
        return records


def run_suite(config: EngineConfig, suite: str) -> SuiteReport:
    """Run a single suite (or ``all``) for a configuration."""
    return VerificationEngine(config).run_suite(suite)
