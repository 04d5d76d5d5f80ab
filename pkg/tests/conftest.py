import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))  # make oracles importable

from hktrace.quadrature import QuadratureSpec


@pytest.fixture
def spec():
    return QuadratureSpec()


@pytest.fixture
def fast_spec():
    return QuadratureSpec(rel_tol=1e-8)
