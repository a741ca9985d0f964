import pytest

from bohreq.config import Config


@pytest.fixture(autouse=True)
def fresh_config():
    """every test starts from the default settings"""
    Config().reset()
    yield Config()
    Config().reset()
