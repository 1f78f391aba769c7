import pytest

from rosa.fixtures import desk_kb, minimal_kb
from rosa.storage import save_kb


@pytest.fixture(scope="session")
def desk():
    # immutable value; sharing one instance across the session is safe
    return desk_kb()


@pytest.fixture
def kb_file(tmp_path):
    path = tmp_path / "desk.rosa.json"
    save_kb(desk_kb(), path)
    return path


@pytest.fixture
def minimal():
    return minimal_kb()
