import sys
from pathlib import Path

import pytest

from kg2t.cli import default_template_path
from kg2t.records import read_records
from kg2t.templates import load_template_library

TESTS_DIR = Path(__file__).resolve().parent
FIXTURES = TESTS_DIR / "fixtures"

sys.path.insert(0, str(TESTS_DIR))  # for the oracles module

DALLAS_TEMPLATE_TEXT = (
    "Dallas Green (baseball) (August 4 1934 -- March 22 2017) was born in "
    "Newport, Delaware. He played for the New York Mets and Philadelphia "
    "Phillies. He died in Philadelphia."
)
DALLAS_DATADRIVEN_TEXT = (
    "Dallas Green (baseball) (August 4 1934 -- March 22 2017) was an American "
    "football position played on team / speciality who played for the New York "
    "Mets. He was born in Newport, Delaware in Newport, Delaware."
)
TED_TEMPLATE_TEXT = (
    "Ted Kleinhans (April 8 1899 -- July 24 1985) was born in Deer Park, "
    "Wisconsin. He played for the Philadelphia Phillies, Cincinnati Reds and "
    "New York Yankees. He died in Redington Beach, Florida."
)
SOULEYMANE_TEMPLATE_TEXT = (
    "Souleymane Ndéné Ndiaye (born 6 August 1958 in Kaolack, Senegal) "
    "is a Politician and Lawyer."
)


@pytest.fixture(scope="session")
def snippets():
    records = read_records(FIXTURES / "graph_snippets.jsonl")
    return {r.name_id: r for r in records}


@pytest.fixture(scope="session")
def dallas(snippets):
    return snippets["Dallas Green (baseball)"]


@pytest.fixture(scope="session")
def ted(snippets):
    return snippets["Ted Kleinhans"]


@pytest.fixture(scope="session")
def souleymane(snippets):
    return snippets["Souleymane Ndéné Ndiaye"]


@pytest.fixture(scope="session")
def xu(snippets):
    return snippets["Xu Huaiwen"]


@pytest.fixture(scope="session")
def library():
    return load_template_library(default_template_path())


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
