import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from template_mset import (DyadicIntervalSet, RandomTemplateSpec, TemplateRoot, psi_value,
                           random_root, root_from_index, suffix)

GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize("root, value", [("1", 0.5), ("01", 0.25), ("111", 0.875), ("", 0.0)])
def test_psi_value(root, value):
    assert psi_value(root) == value


@pytest.mark.parametrize("j, depth, root", [(0, 3, "000"), (5, 3, "101"), (7, 3, "111")])
def test_root_from_index(j, depth, root):
    assert str(root_from_index(j, depth)) == root


@pytest.mark.parametrize("j, depth", [(-1, 3), (8, 3), (0, 31)])
def test_root_from_index_range(j, depth):
    with pytest.raises(ValueError):
        root_from_index(j, depth)


@pytest.mark.parametrize("k, expected", [(0, "1011"), (1, "011"), (4, "")])
def test_suffix(k, expected):
    assert str(suffix("1011", k)) == expected


def test_suffix_range():
    with pytest.raises(ValueError):
        suffix("1011", 5)


def test_parse_rejects_other_symbols():
    with pytest.raises(ValueError):
        TemplateRoot.parse("0120")


@given(st.integers(0, 30).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1))))
def test_psi_inverts_index(nj):
    n, j = nj
    assert psi_value(root_from_index(j, n)) == j * 2.0**-n
    assert root_from_index(j, n).index == j


@given(st.text(alphabet="01", max_size=40), st.data())
def test_suffix_composes(text, data):
    a = data.draw(st.integers(0, len(text)))
    b = data.draw(st.integers(0, len(text) - a))
    assert suffix(suffix(text, a), b) == suffix(text, a + b)


def test_random_root_extremes():
    assert str(random_root(RandomTemplateSpec(0.0, 5, 1))) == "00000"
    assert str(random_root(RandomTemplateSpec(1.0, 5, 1))) == "11111"


def test_random_root_golden():
    golden = json.loads((GOLDEN / "random_root.json").read_text())
    spec = RandomTemplateSpec(0.5, 20, 42)
    assert str(random_root(spec)) == golden["p=0.5,len=20,seed=42"]
    assert random_root(spec) == random_root(spec)


def test_random_root_prefix_stable():
    long = random_root(RandomTemplateSpec(0.3, 200, 9))
    short = random_root(RandomTemplateSpec(0.3, 50, 9))
    assert long.bits[:50] == short.bits


def test_random_spec_validation():
    with pytest.raises(ValueError):
        RandomTemplateSpec(1.5, 3, 0)
    with pytest.raises(ValueError):
        RandomTemplateSpec(0.5, 3, -1)


def test_dyadic_set_validation():
    with pytest.raises(ValueError):
        DyadicIntervalSet(2, np.array([1, 1]))
    with pytest.raises(ValueError):
        DyadicIntervalSet(2, np.array([4]))


def test_dyadic_measure_and_intervals():
    s = DyadicIntervalSet(3, np.array([0, 1, 2, 5]))
    assert s.measure() == 0.5
    assert s.intervals() == [(0.0, 0.375), (0.625, 0.75)]
    assert 5 in s and 4 not in s
    assert [str(r) for r in s.roots()] == ["000", "001", "010", "101"]


@given(st.integers(0, 10).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.integers(0, 2**n - 1)))))
def test_refinement_preserves_measure(case):
    n, members = case
    s = DyadicIntervalSet(n, np.array(sorted(members), dtype=np.int64))
    r = s.refine()
    assert r.depth == n + 1
    assert r.measure() == s.measure()
    assert r.intervals() == s.intervals()
