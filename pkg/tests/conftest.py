import json
from pathlib import Path

import pytest

from mqshbc.coils import mutual_coaxial
from mqshbc.link import LinkModel, Termination
from mqshbc.tissuedb import get_tissue, load_tissue_db

DATA = Path(__file__).parent / "data"
L_ANCHOR = 260e-9


@pytest.fixture(scope="session")
def goldens():
    return json.loads((DATA / "goldens.json").read_text())


@pytest.fixture(scope="session")
def tissue_db():
    return load_tissue_db()


@pytest.fixture(scope="session")
def muscle(tissue_db):
    return get_tissue(tissue_db, "muscle")


@pytest.fixture(scope="session")
def anchored_link():
    """Two 260 nH rings, 10 cm apart, 50-ohm source and load."""
    m = mutual_coaxial(0.05, 0.05, 0.10)
    return LinkModel(L_ANCHOR, L_ANCHOR, m, Termination.resistive(50.0), Termination.resistive(50.0))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
