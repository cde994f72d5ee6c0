"""
Weak Quantum Algebra - exact reduction, weak Hopf verification and modules for wU_q^tau(G).
"""

from weak_quantum_algebra.cartan import BorcherdsCartanDatum, validate_datum
from weak_quantum_algebra.characters import CharacterSeries, truncated_character
from weak_quantum_algebra.core import VerificationEngine, load_config, run_suite
from weak_quantum_algebra.models import CheckRecord, EngineConfig, SuiteReport
from weak_quantum_algebra.parser import parse_expression
from weak_quantum_algebra.presentation import (
    AlgebraElement,
    Presentation,
    TypeTable,
    build_presentation,
    quantum_group_presentation,
)
from weak_quantum_algebra.qscalar import QScalar

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "BorcherdsCartanDatum",
    "CharacterSeries",
    "CheckRecord",
    "EngineConfig",
    "Presentation",
    "QScalar",
    "SuiteReport",
    "TypeTable",
    "VerificationEngine",
    "build_presentation",
    "load_config",
    "parse_expression",
    "quantum_group_presentation",
    "run_suite",
    "truncated_character",
    "validate_datum",
]
