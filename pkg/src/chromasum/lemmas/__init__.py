"""Las-Vegas samplers with explicit condition checkers."""

from chromasum.lemmas.ordering import (
    BAND_A,
    BAND_B,
    BAND_C,
    OrderingPartition,
    OrderingSample,
    check_ordering,
    sample_ordering,
    sample_until_ordering,
)
from chromasum.lemmas.sparse import (
    SparseSample,
    SparseSubgraph,
    check_sparse_subgraph,
    draw_sparse_subgraph,
    sample_sparse_subgraph,
)
