import pytest

from luinv import parse_oa

# the 9-row strength-2 array over three symbols used across the suite
EXAMPLE_OA_TEXT = """\
0 0 0
0 1 1
0 2 2
1 0 1
1 1 2
1 2 0
2 0 2
2 1 0
2 2 1
"""

GHZ_OA_TEXT = "0 0 0\n1 1 1\n"


@pytest.fixture
def example_oa():
    return parse_oa(EXAMPLE_OA_TEXT)


@pytest.fixture
def ghz_oa():
    return parse_oa(GHZ_OA_TEXT, local_dim=2)
