import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def par2():
    from laxfact.parmap import build_par_category

    return build_par_category(2)


@pytest.fixture(scope="session")
def U2():
    from laxfact.ortho import par_universe

    return par_universe(2)


@pytest.fixture(scope="session")
def par_index(par2):
    """Oracle tuple -> morphism index in Par<=2."""
    return {(p.dom, p.cod, p.values): i for i, p in ((i, par2.map(i)) for i in range(par2.n_morphisms))}


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
