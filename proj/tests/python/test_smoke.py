import os

import pytest

import gridcube

DATA = os.environ.get("GRIDCUBE_TEST_DATA", os.path.join(os.path.dirname(__file__), "..", "data"))


def test_sequences():
    assert gridcube.exponents([3, 7, 4]) == [0, 2, 5, 7]
    assert gridcube.level_budgets([3, 7, 4, 3])[1:] == [63, 8, 2]
    assert gridcube.s_sequence([3, 7, 4], 2) == [2, 3, 3, 3]
    assert gridcube.s_sequence([3, 7, 4, 3], 3) == [1, 1, 2]


def test_designation_rows():
    F = gridcube.designation_matrix([3, 7, 4], 2)
    assert [row.count("1") for row in F] == [2, 3, 3, 3]
    fx = gridcube.build_fx([1, 1, 2], 4)
    assert [row.count("1") for row in fx] == [1, 1, 2]


def test_embed_is_injective():
    out = gridcube.embed([3, 7, 4])
    assert out["n"] == 7
    assert len(set(out["labels"])) == 84
    assert all(0 <= x < 128 for x in out["labels"])
    assert out["dilation"] == max(d for d, c in enumerate(out["histogram"]) if c)


def test_small_grid_and_oracle():
    assert gridcube.embed([2, 2])["dilation"] == 1
    assert gridcube.bandwidth([2, 3], 3) == 1
    with pytest.raises(ValueError):
        gridcube.bandwidth([4, 4], 4)


def test_audit_and_file():
    rep = gridcube.audit([3, 7, 4, 3], os.path.join(DATA, "table1bc.txt"))
    assert rep["ok"], rep["text"]
    text = gridcube.embedding_file([5, 6, 7])
    back = gridcube.audit_file(text)
    assert back["ok"]
    assert back["checks"]["file.matches_library"] == ("REPORTED", "yes")


def test_caterpillar_labeling():
    spine, leaves = gridcube.caterpillar(3, 1)
    assert spine == [0, 1, 3, 2]
    assert sorted(spine + [x for ls in leaves for x in ls]) == list(range(8))
    assert sorted(gridcube.labeling(6, 5)) == list(range(1, 65))
    assert gridcube.window_ok(6, 5, 5)
    assert not gridcube.window_ok(6, 5, 6)
    with pytest.raises(gridcube.SearchExhausted):
        gridcube.caterpillar(5, 3)
