import sys
import pytest
from hypothesis import settings

from morincob import Field, SpaceModel, TotalClass, build_truncated_poly
from morincob.modelio import parse_poly

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def space(gens, field, dim, tangent="1"):
    alg = build_truncated_poly(gens, field, dim, check=True)
    return SpaceModel(alg, TotalClass.from_element(parse_poly(tangent, alg)))


@pytest.fixture
def cp2():
    return space([("x", 2, 3)], Field.RAT, 4, "1 + 3*x^2")


@pytest.fixture
def rp2():
    return space([("a", 1, 3)], Field.F2, 2, "1 + a + a^2")


@pytest.fixture
def cp3():
    return space([("x", 2, 4)], Field.RAT, 6, "1 + 4*x^2")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
