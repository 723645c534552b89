import numpy as np
import pytest
from hypothesis import settings

from kovatlas import OrbitParams, PencilParams

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def unit():
    return PencilParams(1.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def cloud_v():
    from kovatlas.topology import image_cloud

    return image_cloud(OrbitParams(6.0, 1.0), PencilParams(1.0, 1.0), 100_000, seed=11)


@pytest.fixture(scope="session")
def model_v():
    from kovatlas.diagram import build_diagram

    return build_diagram(6.0, 1.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def model_i():
    from kovatlas.diagram import build_diagram

    return build_diagram(4.002, 2.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def cloud_i():
    from kovatlas.topology import image_cloud

    return image_cloud(OrbitParams(4.002, 2.0), PencilParams(1.0, 1.0), 100_000, seed=11)



def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
