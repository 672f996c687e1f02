import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from population_election.config import Params  # noqa: E402
from population_election.context import ProtocolContext  # noqa: E402
from population_election.randomness import Randomness  # noqa: E402


@pytest.fixture
def make_ctx():
    """Factory for a ProtocolContext over seeded true randomness."""

    def _make(params: Params, seed: int = 0) -> ProtocolContext:
        return ProtocolContext.build(params, Randomness(params.rng_mode, np.random.default_rng(seed)))

    return _make


@pytest.fixture
def small_params():
    return Params.create(n=8, r=2)
