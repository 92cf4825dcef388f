"""Every acceptance criterion, one test each, with a PASS/FAIL line printed per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""

import pytest

from forestident import acceptance


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda c: f"{c.number}-{c.key}")
def test_criterion(criterion):
    result = acceptance.run_criterion(criterion)
    print(result.line())
    assert result.passed, result.line()


def test_injected_sign_bug_breaks_matrix_tree_criterion(monkeypatch):
    import forestident.laplacian as lap

    real = lap.forest_sign
    monkeypatch.setattr(lap, "forest_sign", lambda rows, cols, pairing: abs(real(rows, cols, pairing)))
    (mtt,) = acceptance.select(["mtt"])
    result = acceptance.run_criterion(mtt)
    print("with sign bug injected:", result.line())
    assert not result.passed


def test_selection_by_key_and_number():
    assert [c.number for c in acceptance.select(["blocks", "7"])] == [5, 7]
    with pytest.raises(KeyError):
        acceptance.select(["missing"])
