import pytest

from hermcode.census import CensusConfig, verify_table
from hermcode.hermitian_surface import surface


@pytest.fixture(scope="session")
def s2():
    return surface(2)


@pytest.fixture(scope="session")
def s3():
    return surface(3)


@pytest.fixture(scope="session")
def census2(s2):
    return verify_table(s2, "exhaustive", CensusConfig())


@pytest.fixture(scope="session")
def census3(s3):
    """Stratified t=3 census with the full 10^6 samples."""
    return verify_table(s3, "stratified", CensusConfig(sample_size=10**6, seed=0))


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """Record one acceptance line; the test still asserts on its own."""

    def _record(key: str, ok: bool, text: str):
        ACCEPTANCE[key] = (bool(ok), text)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")

    def order(key):
        head, _, tail = key.partition(".")
        return int(head), tail

    for key in sorted(ACCEPTANCE, key=order):
        ok, text = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {key}: {text}")
