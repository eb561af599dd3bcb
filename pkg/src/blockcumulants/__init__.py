"""Moment and cumulant tensors of multivariate data in blocked storage.

Super-symmetric tensors are stored as unique sorted-index blocks, cutting
storage and arithmetic by a factor approaching m!; cumulants of any order
come from the central-moment recursion over min-size-two partitions, checked
against dense naive reference implementations.
"""

__version__ = "0.1.0"

from ._engines import HAVE_COMPILED
from .cumulants import CumulantSet, cumulant, cumulants_upto, outer_prod_cum
from .errors import ResourceGuardError, ValidationError
from .moments import (
    as_data_matrix,
    center,
    moment,
    moment_block,
    moment_parallel,
    moment_parallel_blocks,
)
from .symtensor import (
    BlockSymTensor,
    block_edges,
    block_keys,
    canonical_index,
    locate,
    unique_block_count,
)

__all__ = [
    "__version__",
    "HAVE_COMPILED",
    "BlockSymTensor",
    "CumulantSet",
    "ResourceGuardError",
    "ValidationError",
    "as_data_matrix",
    "block_edges",
    "block_keys",
    "canonical_index",
    "center",
    "cumulant",
    "cumulants_upto",
    "locate",
    "moment",
    "moment_block",
    "moment_parallel",
    "moment_parallel_blocks",
    "outer_prod_cum",
    "unique_block_count",
]
