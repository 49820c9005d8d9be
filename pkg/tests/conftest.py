import numpy as np
import pandas as pd
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def write_wide_csv(path, dates, columns, metadata_rows=()):
    """Write a FRED-style wide CSV; ``metadata_rows`` go right after the header."""
    names = list(columns)
    lines = [",".join(["sasdate"] + names)]
    for row in metadata_rows:
        lines.append(",".join(str(x) for x in row))
    for i, d in enumerate(dates):
        cells = []
        for name in names:
            v = columns[name][i]
            cells.append("" if not np.isfinite(v) else repr(float(v)))
        lines.append(",".join([d] + cells))
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def fred_md_csv(tmp_path):
    """127 monthly random-walk series with a transform-code row, FRED-MD style."""
    gen = np.random.default_rng(7)
    n = 240
    dates = [f"{1 + (i % 12)}/1/{1960 + i // 12}" for i in range(n)]
    cols = {}
    for j in range(127):
        x = 100 + np.cumsum(gen.standard_normal(n))
        if j % 10 == 3:
            x[: 5 + j % 7] = np.nan  # late starters
        cols[f"S{j + 1:03d}"] = x
    meta = [["Transform:"] + ["5"] * 127]
    return write_wide_csv(tmp_path / "fredmd.csv", dates, cols, meta)


def quarterly_dates(n, start=1960):
    return [d.strftime("%Y-%m-%d") for d in pd.date_range(f"{start}-01-01", periods=n, freq="QS")]
