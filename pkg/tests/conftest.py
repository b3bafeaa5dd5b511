import json
from pathlib import Path

import pytest

from peanokit.curve import Cell, FractalCurve, FractionSpec
from peanokit.geometry import isometry_from_code

CURVES_DIR = Path(__file__).resolve().parent.parent / "curves"


def spec(col, row, iso, rev=False):
    return FractionSpec(Cell(col, row), isometry_from_code(iso), rev)


@pytest.fixture(scope="session")
def hilbert():
    return FractalCurve(
        2,
        [spec(0, 0, "md"), spec(0, 1, "e"), spec(1, 1, "e"), spec(1, 0, "ma")],
    )


@pytest.fixture(scope="session")
def hilbert_rev_variant():
    """Hilbert cell order with one time-reversed fraction."""
    return FractalCurve(
        2,
        [spec(0, 0, "md"), spec(0, 1, "my", True), spec(1, 1, "e"), spec(1, 0, "ma")],
    )


@pytest.fixture(scope="session")
def diag9():
    """Diagonal genus-9 curve with two vertex-adjacent junctions."""
    return FractalCurve.from_dict(
        json.loads((CURVES_DIR / "genus9_diagonal_vertex.json").read_text())
    )


@pytest.fixture(scope="session")
def genus9_minimal():
    """A genus-9 curve achieving the minimal ratio 17/3."""
    return FractalCurve.from_dict(
        json.loads((CURVES_DIR / "genus9_minimal.json").read_text())
    )


@pytest.fixture(scope="session")
def hilbert_path(tmp_path_factory):
    return str(CURVES_DIR / "hilbert.json")


@pytest.fixture(scope="session")
def regression_curves(hilbert, hilbert_rev_variant, diag9, genus9_minimal):
    """Named curves pinned for cross-path agreement checks."""
    return {
        "hilbert": hilbert,
        "hilbert-rev-variant": hilbert_rev_variant,
        "diagonal-vertex-9": diag9,
        "minimal-9": genus9_minimal,
    }
