import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ndv_scout import synth


@pytest.fixture(scope="session")
def uniform_file(tmp_path_factory):
    """A well-spread reference file: int64, ndv=100, 50 row groups."""
    path = tmp_path_factory.mktemp("corpus") / "uniform_ref.parquet"
    spec = synth.ColumnSpec(
        name="ints",
        value_type="int64",
        ndv=100,
        rows=50_000,
        row_group_rows=1000,
        layout=synth.Layout.UNIFORM,
        seed=7,
    )
    truth = synth.generate_file([spec], path)
    return path, truth
