import pytest
from click.testing import CliRunner


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def config_file(tmp_path):
    def write(text):
        path = tmp_path / 'run.env'
        path.write_text(text, encoding='utf-8')
        return path

    return write
