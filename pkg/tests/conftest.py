import pytest

from quatks.catalog import load_catalog
from quatks.riemann import normalize_mu_sign, real_embedding


@pytest.fixture(scope="session")
def catalog():
    return {e.id: e for e in load_catalog()}


@pytest.fixture(scope="session")
def maximal_entries(catalog):
    return [e for e in catalog.values() if e.maximal]


@pytest.fixture(scope="session")
def polarized(maximal_entries):
    """(entry, order, sign-normalized mu, embedding) for every maximal catalog order."""
    out = []
    for e in maximal_entries:
        O = e.order()
        sig = real_embedding(O.algebra)
        out.append((e, O, normalize_mu_sign(O, e.mu(O), sig), sig))
    return out


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
