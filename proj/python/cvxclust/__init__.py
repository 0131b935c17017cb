"""Convex clustering with certified solutions."""

from ._core import (
    NumericalError,
    __version__,
    bounding_balls,
    certify,
    collinear_impossibility,
    default_fuse_tol,
    extract_partition,
    generate,
    kmeans,
    lambda_lower_bound,
    lambda_path,
    lambda_upper_bound,
    objective,
    solve,
    solve_reference,
    ward,
)

__all__ = [
    "NumericalError",
    "__version__",
    "bounding_balls",
    "certify",
    "collinear_impossibility",
    "default_fuse_tol",
    "extract_partition",
    "generate",
    "kmeans",
    "lambda_lower_bound",
    "lambda_path",
    "lambda_upper_bound",
    "objective",
    "solve",
    "solve_reference",
    "ward",
]
