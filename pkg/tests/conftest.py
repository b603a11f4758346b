import pytest

from cubespec.coeff_group import GroupParams
from cubespec.complex_model import build_quotient_complex

ACCEPTANCE_PAIRS = [(4, 2), (4, 3), (5, 2), (5, 3), (6, 2)]


@pytest.fixture(scope="session")
def acceptance_builds():
    """One truncation per acceptance pair, spanning [-(2k+2), 2k+2]."""
    builds = {}
    for m, k in ACCEPTANCE_PAIRS:
        params = GroupParams(m, k)
        builds[(m, k)] = build_quotient_complex(params, -(2 * k + 2), 2 * k + 2)
    return builds
