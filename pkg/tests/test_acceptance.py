"""One test per acceptance criterion; each prints a single PASS/FAIL line.

The lines bypass output capture, so they show in a plain ``pytest -v`` run.
"""

import pytest

from fracmat import verify


@pytest.mark.parametrize("check", verify.CRITERIA, ids=[f"criterion_{i + 1}" for i in range(len(verify.CRITERIA))])
def test_criterion(check, capsys):
    result = check()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()
