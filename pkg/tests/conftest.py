import pytest

from curveflow import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the jitted kernels once so individual tests time fairly
    _kernels.warmup()
