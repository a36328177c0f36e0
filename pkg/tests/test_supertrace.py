from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from supertrace_cases import CHECKS


@pytest.mark.parametrize("name", list(CHECKS))
@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**64 - 1))
def test_supertrace_identity(name, seed):
    assert CHECKS[name](random.Random(seed))
