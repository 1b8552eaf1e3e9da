import pytest

from heatzeta import backend


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile/exercise the active kernel set once so individual tests are not
    # charged for jit warm-up
    backend.impl.warm_up()
