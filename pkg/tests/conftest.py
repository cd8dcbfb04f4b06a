import pytest

from momentum_jumps import GAAS
from momentum_jumps.constants import NM
from momentum_jumps.core import Parabolic
from momentum_jumps.device import paper_device

# Frozen reference values, computed once with 30-digit mpmath arithmetic from
# the CODATA constants (independent of the package code paths).
OMEGA0_4NM = 1.0799219780834232674e14
OMEGA0_5NM = 6.9115006597339089114e13
B1_4NM = 6.4092497869981196096
B1_5NM = 5.1360388275847381293
KX_JUMP_4NM = 3.9300982714697055524e7
KX_JUMP_5NM = 3.9564493975462532649e7
THETA_4NM_640 = 10.028596442663009228
THETA_5NM_644 = 10.033038546312939217
ZBAR_RATIO_4NM = 0.024055424882753658
ZBAR_RATIO_5NM = 0.037524340572836930

_ACCEPTANCE = []


@pytest.fixture
def gaas():
    return GAAS


@pytest.fixture
def well_4nm(gaas):
    return Parabolic.from_z0(4 * NM, gaas)


@pytest.fixture
def well_5nm(gaas):
    return Parabolic.from_z0(5 * NM, gaas)


@pytest.fixture(scope="session")
def device_a():
    return paper_device(4.0, 640.0)


@pytest.fixture(scope="session")
def device_b():
    return paper_device(5.0, 644.0)


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE:
        terminalreporter.write_line(line)
