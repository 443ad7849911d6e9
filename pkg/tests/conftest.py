import pytest
from models.storage import CategoryFile, FunctorFile, GroupFile
from util.setup import DEFAULT_FIXTURE_DIR


@pytest.fixture(scope="session")
def fixture_dir():
    return DEFAULT_FIXTURE_DIR


@pytest.fixture(scope="session")
def load_category():
    cache = {}

    def load(name):
        if name not in cache:
            cache[name] = CategoryFile.read(DEFAULT_FIXTURE_DIR / name)
        return cache[name]

    return load


@pytest.fixture(scope="session")
def load_functor():
    cache = {}

    def load(name):
        if name not in cache:
            cache[name] = FunctorFile.read(DEFAULT_FIXTURE_DIR / name)
        return cache[name]

    return load


@pytest.fixture(scope="session")
def load_group():
    def load(name):
        return GroupFile.read(DEFAULT_FIXTURE_DIR / name)

    return load
