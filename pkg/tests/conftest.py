import pytest
from hypothesis import settings

from arxgen.model import GeneratorParams

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def bench():
    """Benchmark machine used throughout the case studies."""
    return GeneratorParams(H=2.5, R=0.05, T=0.5)
