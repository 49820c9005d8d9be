"""Trend MSE for the I(2) designs (DGPs 1-5), quarterly and monthly."""

from _common import bench_from_config

if __name__ == "__main__":
    bench_from_config("table1", __doc__)
