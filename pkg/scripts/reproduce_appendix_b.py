"""Trend MSE for DGPs 6-10 with lambda = 1.6e-5 * n^4."""

from _common import bench_from_config

if __name__ == "__main__":
    bench_from_config("appendix_b", __doc__)
