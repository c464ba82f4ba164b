import os
import shutil
from pathlib import Path

import pytest


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("HRNLS_CLI") or shutil.which("hrnls")
    if not path:
        candidate = Path(__file__).resolve().parents[2] / "build" / "hrnls"
        path = str(candidate) if candidate.exists() else None
    if not path:
        pytest.skip("hrnls executable not found; set HRNLS_CLI")
    return path
