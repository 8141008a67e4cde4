from __future__ import annotations

import pytest

from grplab.groups import build_group

# spec strings for the standard test fleet, smallest first
FLEET_SPECS = [
    "Z/1",
    "Z/4",
    "Z/6",
    "Z/12",
    "Z/2 x Z/3",
    "Z/2 x Z/2 x Z/2",
    "perm:(1 2 3);(1 2)",          # S3
    "perm:(1 2 3 4);(1 3)",        # D4
    "perm:(1 2 3);(1 2)(3 4)",     # A4
    "perm:(1 2 3 4);(1 2)",        # S4
    "PSL2(5)",
]

_cache: dict = {}


def fleet_group(spec: str):
    if spec not in _cache:
        _cache[spec] = build_group(spec)
    return _cache[spec]


@pytest.fixture(params=FLEET_SPECS, ids=lambda s: s.replace(" ", ""))
def any_fleet_group(request):
    return fleet_group(request.param)


@pytest.fixture()
def s3():
    return fleet_group("perm:(1 2 3);(1 2)")


@pytest.fixture()
def s4():
    return fleet_group("perm:(1 2 3 4);(1 2)")


@pytest.fixture()
def psl2_5():
    return fleet_group("PSL2(5)")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import ACCEPTANCE_LINES
    except ImportError:
        return
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
