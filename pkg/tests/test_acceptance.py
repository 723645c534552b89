"""The ten acceptance criteria at their stated tolerances, one test each."""

import pytest

from kovatlas import acceptance

LINES: list[str] = []


def _run(check, **kw):
    res = check(**kw)
    line = res.line()
    LINES.append(line)
    print(line)
    return res


def test_criterion_01_algebra():
    assert _run(acceptance.check_algebra).passed


def test_criterion_02_scaling():
    assert _run(acceptance.check_scaling).passed


def test_criterion_03_rank1_families():
    assert _run(acceptance.check_rank1_families).passed


def test_criterion_04_rank0_census():
    assert _run(acceptance.check_rank0_census).passed


def test_criterion_05_type_table():
    assert _run(acceptance.check_type_table).passed


def test_criterion_06_geometry():
    # the tabulated zero-crossing counts disagree with the computed ones in part of
    # the grid; the check runs as stated and this test fails until that is resolved
    res = _run(acceptance.check_geometry)
    assert res.passed, res.measured


def test_criterion_07_regions():
    assert _run(acceptance.check_regions).passed


def test_criterion_08_triple_intersection():
    assert _run(acceptance.check_triple_intersection).passed


@pytest.mark.slow
def test_criterion_09_topology():
    assert _run(acceptance.check_topology).passed


def test_criterion_10_limit():
    assert _run(acceptance.check_limit).passed
