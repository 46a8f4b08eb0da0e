import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from csmx.demo import SINGLE_CASE_CSV, healthcare_log, healthcare_model
from csmx.ingest import ingest_csv


@pytest.fixture(scope="session")
def single_case_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("logs") / "single_case.csv"
    path.write_text(SINGLE_CASE_CSV)
    return path


@pytest.fixture(scope="session")
def single_case_log(single_case_path):
    return ingest_csv(single_case_path)


@pytest.fixture(scope="session")
def fixture_log():
    return healthcare_log()


@pytest.fixture(scope="session")
def fixture_model():
    return healthcare_model()
