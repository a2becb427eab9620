"""conjlab: bi-invariant norms, conjugacy-class graphs and almost-
homomorphisms on finite groups, with membership experiments for products of
conjugacy classes across finite quotients of free groups."""

from .words import GenImages, Word, ball, ball_size, evaluate, parse_word
from .groups import (
    ClassPartition,
    FiniteGroup,
    Perm,
    Subgroup,
    class_product,
    conjugacy_classes,
    direct_product,
    image_subgroup,
    iterated_class_product,
    perm_group,
    square_embed,
    symmetric_group,
    table_group,
)
from .metrics import (
    CharacterData,
    FiniteNormTarget,
    HammingTarget,
    Norm,
    character_norm,
    hamming_norm,
    hamming_norm_on,
    norm_kernel,
    verify_norm_axioms,
)
from .conjgraph import ConjGraph, GraphNorm, build_graph, graph_norm, scaled_graph_metric
from .almosthom import (
    AlmostHom,
    CosetSystem,
    PartialMulSet,
    ahom_to_separating,
    amplify,
    defect,
    is_ahom,
    iterate_amplify,
    margin,
    separating_to_ahom,
)
from .separability import (
    NOracle,
    check_separation,
    class_product_membership,
    closure_search,
    profinite_nonmember_certificate,
    stabilization,
    verify_certificate,
)

__version__ = "0.1.0"
