import pytest

from rkboundary import zoo
from rkboundary.sampling import quasi_random_sample

_RESULTS = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Collects one line per acceptance criterion for the terminal summary."""
    stash = request.config.stash
    if _RESULTS not in stash:
        stash[_RESULTS] = []
    return stash[_RESULTS]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_RESULTS, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines):
        terminalreporter.write_line(line)


@pytest.fixture
def disk_sample():
    return quasi_random_sample(zoo.DISK, 12, seed=3)
