import pytest

from mdus import _kernels, running_example
from mdus.generator import gen_micro

CORPUS_SEEDS = range(120)
DELTAS = ("0.05", "0.1", "0.25", "0.5")
BACKENDS = ["numba", "numpy"] if _kernels.HAVE_NUMBA else ["numpy"]


@pytest.fixture
def ex():
    return running_example()


@pytest.fixture(params=BACKENDS)
def backend(request):
    prev = _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(prev)


def corpus():
    return [gen_micro(s) for s in CORPUS_SEEDS]


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
