from fractions import Fraction
from pathlib import Path

import pytest

from qhflow.config import Settings
from qhflow.services.field_core import QHField, validate
from qhflow.services.poly_core import BivarPoly, WeightSignature

X1_JSON = (
    '{"p": 1, "q": 2, "P": [[2, 0, "1"], [0, 1, "-1/2"]], "Q": [[3, 0, "1"], [1, 1, "2"]]}'
)
X2_EXPR = "p = 1\nq = 2\nP = x^2 - y\nQ = 2x^3 - 3xy\n"


def make_field(p: int, q: int, m: int, P: dict, Q: dict) -> QHField:
    """Validated field from term dictionaries."""
    return validate(WeightSignature(p, q, m), BivarPoly.from_terms(P), BivarPoly.from_terms(Q))


@pytest.fixture
def test_settings() -> Settings:
    """Provide test settings."""
    return Settings(log_level="DEBUG", log_format="console", plot_trajectories=6)


@pytest.fixture
def x1() -> QHField:
    """Unstable global focus (x^2 - y/2, x^3 + 2xy)."""
    return make_field(1, 2, 2, {(2, 0): 1, (0, 1): Fraction(-1, 2)}, {(3, 0): 1, (1, 1): 2})


@pytest.fixture
def x2() -> QHField:
    """Four hyperbolic sectors (x^2 - y, 2x^3 - 3xy)."""
    return make_field(1, 2, 2, {(2, 0): 1, (0, 1): -1}, {(3, 0): 2, (1, 1): -3})


@pytest.fixture
def radial() -> QHField:
    """The radial field (x, 2y)."""
    return make_field(1, 2, 1, {(1, 0): 1}, {(0, 1): 2})


@pytest.fixture
def x1_file(tmp_path):
    """X1 as a JSON document on disk."""
    path = tmp_path / "x1.json"
    path.write_text(X1_JSON)
    return path


@pytest.fixture
def x2_file(tmp_path):
    """X2 as an EXPR document on disk."""
    path = tmp_path / "x2.txt"
    path.write_text(X2_EXPR)
    return path


@pytest.fixture
def field_builder():
    """Build validated fields from term dictionaries."""
    return make_field


def pytest_addoption(parser):
    parser.addoption(
        "--update-golden",
        action="store_true",
        default=False,
        help="Rewrite golden SVG files from the current output",
    )


@pytest.fixture
def golden(request):
    """Compare bytes against tests/integration/golden/<name>, or rewrite it with --update-golden."""
    directory = Path(__file__).parent / "integration" / "golden"
    update = request.config.getoption("--update-golden")

    def check(name: str, content: bytes) -> None:
        path = directory / name
        if update:
            directory.mkdir(parents=True, exist_ok=True)
            path.write_bytes(content)
            return
        if not path.exists():
            pytest.skip(f"golden file {name} missing, run pytest --update-golden to record it")
        assert content == path.read_bytes(), f"{name} differs from its golden file"

    return check
