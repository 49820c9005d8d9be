"""Trend MSE for the local-unit-root designs (DGPs 6-10) with lambda fixed at 1600."""

from _common import bench_from_config

if __name__ == "__main__":
    bench_from_config("table2", __doc__)
