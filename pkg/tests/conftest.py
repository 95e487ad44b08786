import pytest
from hypothesis import settings

from kripkebench import fixtures
from kripkebench.cli import run

# the frame catalog grows lazily, so first examples can be slow
settings.register_profile("kripkebench", deadline=None)
settings.load_profile("kripkebench")


@pytest.fixture
def lambda_model():
    return fixtures.lambda_model()


@pytest.fixture
def lean_model():
    return fixtures.lambda_model_lean()


@pytest.fixture
def two_chains():
    return fixtures.two_chains_model()


@pytest.fixture
def v_model():
    return fixtures.v_model()


@pytest.fixture
def cli(capsys):
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""

    def invoke(*argv):
        code = run([str(a) for a in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke
