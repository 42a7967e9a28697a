import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nullcurve import corpus, liealg

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GROUP_FACTORIES = {
    "su2": lambda: liealg.sl_compact(2, -2.0),
    "sl2r": lambda: liealg.sl_split(2, 2.0),
    "u3": lambda: liealg.gl_unitary(3, -1.0),
    "gl2r": lambda: liealg.gl_real(2, 1.0),
    "sl3r": lambda: liealg.sl_split(3, 2.0),
    "abelian3": lambda: liealg.abelian(3),
}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=sorted(GROUP_FACTORIES))
def group(request):
    return GROUP_FACTORIES[request.param]()


@pytest.fixture(params=corpus.list_entries())
def entry(request):
    return corpus.get(request.param)


def interior_points(entry, n=4, inset=0.15):
    Z = entry.domain.grid(n, inset=inset).ravel()
    return [complex(z) for z in Z if not np.isnan(z)]


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
