"""Approximate nearest-neighbor search with a two-level inverted index.

The first level is a k-means codebook; the second splits every region
along the edges of an n-nearest-neighbor centroid graph, storing each
point as an m-byte PQ code plus one byte for its position on the edge.
"""

from ._vlqadc import (
    Index,
    brute_force_gt,
    gen_synthetic,
    read_vecs,
    set_max_threads,
    write_vecs,
)

__all__ = [
    "Index",
    "brute_force_gt",
    "gen_synthetic",
    "read_vecs",
    "set_max_threads",
    "write_vecs",
]
