"""Shared datum gallery and presentation factories."""

import itertools
import json

import pytest

from weak_quantum_algebra.cartan import validate_datum
from weak_quantum_algebra.presentation import TypeTable, build_presentation

GALLERY = {
    "sl2": ([[2]], [1]),
    "sl3": ([[2, -1], [-1, 2]], [1, 1]),
    "imag0": ([[0]], [1]),
    "imag-2": ([[-2]], [1]),
    "mixed": ([[2, -1], [-1, 0]], [1, 1]),
}


def datum(name):
    a, s = GALLERY[name]
    return validate_datum(a, s)


def presentation(name, m=2, tau_e=None, tau_f=None, **kwargs):
    d = datum(name)
    tau = TypeTable(
        e=tuple(tau_e or ["one"] * d.n),
        f=tuple(tau_f or ["one"] * d.n),
    )
    return build_presentation(d, tau, m, **kwargs)


def type_table_cases(ms=(2, 3, 4, 5)):
    """(name, tau_e, tau_f, m) over the gallery, every per-index type table and ms."""
    cases = []
    for name in sorted(GALLERY):
        n = len(GALLERY[name][0])
        for flags in itertools.product(["one", "zero"], repeat=2 * n):
            for m in ms:
                cases.append((name, list(flags[:n]), list(flags[n:]), m))
    return cases


@pytest.fixture(params=sorted(GALLERY))
def gallery_name(request):
    return request.param


@pytest.fixture
def sl2_m3():
    return presentation("sl2", 3)


@pytest.fixture
def sl3():
    return presentation("sl3", 2)


@pytest.fixture
def config_file(tmp_path):
    """Write a JSON engine configuration and return its path."""

    def write(name="engine.json", **fields):
        fields.setdefault("matrix", [[2]])
        path = tmp_path / name
        path.write_text(json.dumps(fields), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for key in ("WQA_BUDGET", "WQA_MAX_WORD_LENGTH"):
        monkeypatch.delenv(key, raising=False)
