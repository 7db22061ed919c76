import pytest

ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = {}


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    from uqfrank import _accel

    if request.param == "numba" and not _accel.HAVE_NUMBA:
        pytest.skip("numba not installed")
    monkeypatch.setenv("UQF_BACKEND", request.param)
    return request.param


@pytest.fixture
def acceptance_log(request):
    return request.config.stash[ACCEPTANCE_KEY]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(lines):
        terminalreporter.write_line(lines[num])
