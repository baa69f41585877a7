import os
import sys
import pytest

# Aggiunge la cartella src al path
sys.path.insert(
    0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "src"))
)


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: ricerche esaustive lunghe (n = 7), eseguite comunque di default"
    )


@pytest.fixture
def diamond():
    """Reticolo 0 < a, b < 1."""
    from poset import from_cover_relations

    return from_cover_relations(
        ["0", "a", "b", "1"],
        [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        name="diamond",
    )


@pytest.fixture
def divisors_12():
    from poset import divisor_lattice

    return divisor_lattice(12)


@pytest.fixture
def chain_5():
    from poset import chain_poset

    return chain_poset(5)


@pytest.fixture
def gcd_set():
    """S = {1, ..., n} nel reticolo dei divisori di mcm(1..n)."""
    from matrices import integer_segment

    return integer_segment


@pytest.fixture(autouse=True)
def default_search_cap(monkeypatch):
    # Il limite di ricerca dipende dall'ambiente: ogni test parte dal default
    monkeypatch.delenv("LATMAT_MAX_N", raising=False)
