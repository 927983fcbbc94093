import doctest

import pytest

import onlineconv.estimators


@pytest.mark.parametrize("module", [onlineconv.estimators])
def test_docstring_examples(module):
    assert doctest.testmod(module).failed == 0
