import json
from pathlib import Path

import pytest

from kgoursat.boundary import BoundaryFunction as BF

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def bessel_oracle():
    with open(DATA / "bessel_oracle.json") as fh:
        return json.load(fh)


def boundary_pairs():
    """Compatible (f, g) pairs covering every builtin kind."""
    table = BF.table([-2.0, -0.5, 0.0, 0.7, 2.0], [0.3, -0.2, 0.0, 0.5, -0.4])
    return [
        ("ramp,zero", BF.ramp(), BF.zero()),
        ("zero,ramp", BF.zero(), BF.ramp()),
        ("one,one", BF.one(), BF.one()),
        ("ramp,poly", BF.ramp(), BF.poly([0.0, 0.5, -0.25])),
        ("poly,poly", BF.poly([1.0, -1.0, 0.5]), BF.poly([1.0, 2.0])),
        ("gauss,gauss", BF.gauss(0.0, 0.7), BF.gauss(0.0, 1.3)),
        ("sin,poly", BF.sin(2.0), BF.poly([0.0, 0.0, 1.0])),
        ("table,ramp", table, BF.ramp()),
        ("gauss,table", BF.gauss(0.5, 0.4) - BF.gauss(0.5, 0.4).at(0.0), table),
        ("poly,sin", BF.poly([0.0, 1.0, 0.0, -0.3]), BF.sin(1.5)),
    ]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
