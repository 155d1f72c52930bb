import numpy as np
import pytest

from twonn import _kernels


@pytest.fixture(scope="session", autouse=True)
def compiled_kernels():
    """Compile the numba kernels once so no test times JIT latency."""
    _kernels.warmup()


def seeded(*key) -> np.random.Generator:
    """Deterministic generator from a structured key (ints or short strings)."""
    ints = [
        int.from_bytes(k.encode(), "little") if isinstance(k, str) else int(k)
        for k in key
    ]
    return np.random.default_rng(np.random.SeedSequence(ints))
