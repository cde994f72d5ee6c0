from typing import Dict, List, Literal, Optional, Tuple

import pandas as pd
from pydantic import BaseModel, Field, computed_field, field_validator, model_validator

from weak_quantum_algebra.cartan import BorcherdsCartanDatum, check_datum, validate_datum

TypeFlag = Literal["one", "zero"]
Status = Literal["pass", "fail", "skip", "xfail", "xpass"]

SUITES = (
    "datum",
    "bialgebra",
    "weak-antipode",
    "gate",
    "subalgebras",
    "grouplikes",
    "morphisms",
    "modules",
    "characters",
)


class TruncationConfig(BaseModel):
    max_word_length: int = Field(default=12, gt=0)
    module_height: int = Field(default=6, gt=0)
    weyl_length: int = Field(default=6, gt=0)


class EngineConfig(BaseModel):
    """One engine run: the datum, the type table, m and the suites to run."""

    matrix: List[List[int]]
    symmetrizers: Optional[List[int]] = None
    tau_E: Optional[List[TypeFlag]] = None
    tau_F: Optional[List[TypeFlag]] = None
    m: int = 2
    truncation: TruncationConfig = TruncationConfig()
    suites: List[str] = ["all"]
    random_words: int = Field(default=100, ge=0)
    seed: int = 0
    grouplike_length: int = Field(default=2, ge=0)

    @field_validator("suites")
    @classmethod
    def known_suites(cls, value: List[str]) -> List[str]:
        for name in value:
            if name != "all" and name not in SUITES:
                raise ValueError(f"unknown suite {name!r}")
        return value

    @model_validator(mode="after")
    def datum_is_valid(self) -> "EngineConfig":
        if self.m < 2:
            raise ValueError(f"m must be at least 2, got {self.m}")
        n = len(self.matrix)
        violations = check_datum(self.matrix, self.symmetrizers or [1] * n)
        if violations:
            raise ValueError(
                "invalid Borcherds-Cartan datum: " + ", ".join(v.render() for v in violations)
            )
        for label, flags in (("tau_E", self.tau_E), ("tau_F", self.tau_F)):
            if flags is not None and len(flags) != n:
                raise ValueError(f"{label} needs {n} entries, got {len(flags)}")
        return self

    @property
    def n(self) -> int:
        return len(self.matrix)

    def datum(self) -> BorcherdsCartanDatum:
        return validate_datum(self.matrix, self.symmetrizers)

    def type_flags(self) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
        e = tuple(self.tau_E or ["one"] * self.n)
        f = tuple(self.tau_F or ["one"] * self.n)
        return e, f

    def selected_suites(self) -> List[str]:
        if "all" in self.suites:
            return list(SUITES)
        return list(self.suites)


class CheckRecord(BaseModel):
    """The outcome of one verification check."""

    check_id: str
    anchor: str
    status: Status
    residue: str = ""
    seconds: float = 0.0

    @computed_field  # type: ignore[misc]
    @property
    def unexpected(self) -> bool:
        return self.status in ("fail", "xpass")

    @classmethod
    def judge(
        cls,
        check_id: str,
        anchor: str,
        ok: bool,
        *,
        expect_ok: bool = True,
        residue: str = "",
        seconds: float = 0.0,
    ) -> "CheckRecord":
        if expect_ok:
            status: Status = "pass" if ok else "fail"
        else:
            status = "xpass" if ok else "xfail"
        return cls(check_id=check_id, anchor=anchor, status=status, residue=residue, seconds=seconds)

    @classmethod
    def skipped(cls, check_id: str, anchor: str, reason: str) -> "CheckRecord":
        return cls(check_id=check_id, anchor=anchor, status="skip", residue=reason)


class SuiteReport(BaseModel):
    suite: str
    records: List[CheckRecord] = []

    @model_validator(mode="after")
    def unique_ids(self) -> "SuiteReport":
        seen = set()
        for record in self.records:
            if record.check_id in seen:
                raise ValueError(f"duplicate check id {record.check_id!r}")
            seen.add(record.check_id)
        self.records = sorted(self.records, key=lambda r: r.check_id)
        return self

    @computed_field  # type: ignore[misc]
    @property
    def ok(self) -> bool:
        return not any(r.unexpected for r in self.records)

    @computed_field  # type: ignore[misc]
    @property
    def counts(self) -> Dict[str, int]:
        totals: Dict[str, int] = {}
        for record in self.records:
            totals[record.status] = totals.get(record.status, 0) + 1
        return totals

    def failures(self) -> List[CheckRecord]:
        return [r for r in self.records if r.unexpected]

    def to_frame(self) -> pd.DataFrame:
        """One row per check, in check-id order."""
        rows = [
            {
                "suite": self.suite,
                "check_id": r.check_id,
                "anchor": r.anchor,
                "status": r.status,
                "residue": r.residue,
                "seconds": round(r.seconds, 4),
            }
            for r in self.records
        ]
        columns = ["suite", "check_id", "anchor", "status", "residue", "seconds"]
        return pd.DataFrame(rows, columns=columns)
