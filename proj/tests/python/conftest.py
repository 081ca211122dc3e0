import os
import pathlib
import shutil

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def oil_bin():
    path = os.environ.get("OIL_BIN") or shutil.which("oil")
    if not path:
        pytest.skip("oil executable not found (set OIL_BIN)")
    return path


@pytest.fixture(scope="session")
def report_schema():
    import json

    return json.loads((ROOT / "schema" / "report.schema.json").read_text())
