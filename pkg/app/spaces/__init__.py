from .subspace import (
    MatrixSpaceShape,
    LinearMatrixSubspace,
    AffineMatrixSubspace,
    AnySubspace,
    from_generators,
    from_basis_vectors,
    full_space,
    zero_space,
    membership,
    elements,
    element_vectors,
    random_element,
    transport,
    span_sum,
    block_projection,
)
from .enumeration import (
    SubspaceIterator,
    gaussian_binomial,
    count_subspaces,
    count_affine,
    enumerate_subspaces,
    enumerate_affine,
    cosets,
    random_subspace,
    random_affine,
)
