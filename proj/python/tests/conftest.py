import os
import pathlib

import pytest

ROOT = pathlib.Path(os.environ.get("LTLDSTAR_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))


@pytest.fixture
def root():
    return ROOT


@pytest.fixture
def patrol():
    import ltldstar

    return ltldstar.sequencing_nba(["A", "B", "C", "D"])
