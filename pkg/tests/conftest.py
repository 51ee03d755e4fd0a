from pathlib import Path

import pytest

from oredim.fixtures import BUNDLED, bundled_paths, load_instance

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def bundled():
    return {p.stem: load_instance(p) for p in bundled_paths()}


@pytest.fixture(scope="session")
def weyl3():
    return load_instance(DATA / "weyl3.json")


@pytest.fixture(scope="session")
def residue():
    return load_instance(DATA / "zmod4-residue.json")


@pytest.fixture(params=BUNDLED)
def fixture_id(request):
    return request.param
