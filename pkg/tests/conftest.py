import functools
from pathlib import Path

import pytest

from wgraph_algebra.coxeter import parse_type
from wgraph_algebra.decomp import build_family
from wgraph_algebra.omega import compute_quotient

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"


@functools.lru_cache(maxsize=None)
def quotient(spec: str):
    return compute_quotient(parse_type(spec))


@functools.lru_cache(maxsize=None)
def family(spec: str):
    return build_family(quotient(spec))


@pytest.fixture
def fixtures_dir():
    return FIXTURES
