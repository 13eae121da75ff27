import pytest

from rgzeta import netgen, spectrum


@pytest.fixture(scope="session")
def dense():
    """Cached dense spectra keyed by (family, k, b)."""
    cache = {}

    def get(family, k, b=None):
        key = (family, k, b)
        if key not in cache:
            cache[key] = spectrum.eig_sym(netgen.laplacian(netgen.build(family, k, b)))
        return cache[key]

    return get


ACCEPTANCE = {}


@pytest.fixture
def record():
    """record(number, ok, detail) stores one acceptance line."""
    def put(number, ok, detail):
        ACCEPTANCE[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(ACCEPTANCE[number])
    return put


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
