import json
from importlib import resources

import numpy as np
import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from branchcount import ParameterSpace, WaveField


def _registry() -> Registry:
    reg = Registry()
    for path in resources.files("branchcount").joinpath("schemas").iterdir():
        if path.name.endswith(".json"):
            schema = json.loads(path.read_text())
            reg = reg.with_resource(schema["$id"], Resource.from_contents(schema))
    return reg


@pytest.fixture(scope="session")
def schema_validator():
    reg = _registry()

    def validate(doc, name):
        schema = reg.contents(f"branchcount/{name}.schema.json")
        Draft202012Validator(schema, registry=reg).validate(doc)

    return validate


@pytest.fixture
def unit_line():
    return ParameterSpace(((0.0, 1.0),), (8,))


@pytest.fixture
def uniform_line(unit_line):
    return WaveField(unit_line, np.ones(8))


@pytest.fixture
def two_step():
    """|ψ|² carries 0.2 on [0, 0.5] and 0.8 on [0.5, 1]."""
    space = ParameterSpace(((0.0, 1.0),), (2,))
    return WaveField(space, [np.sqrt(0.4), np.sqrt(1.6)])


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance_line(request):
    """Record the one-line verdict of an acceptance criterion for the summary."""

    def record(number: int, passed: bool, detail: str) -> None:
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[k])
