from pathlib import Path

import pytest

from multiform.dtd import builtin_schema
from multiform.mapper import map_schema

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def schema():
    return builtin_schema()


@pytest.fixture(scope="session")
def rschema(schema):
    return map_schema(schema)


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture
def write(tmp_path):
    """Drop a file into the test's scratch directory, return its path."""
    def _write(name, content):
        path = tmp_path / name
        if isinstance(content, bytes):
            path.write_bytes(content)
        else:
            path.write_text(content, encoding="utf-8")
        return str(path)
    return _write
