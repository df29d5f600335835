"""Skeletal unitary fusion categories: data, morphisms in fusion-tree bases, duality."""

from .category import (
    BUNDLED,
    CategoryError,
    CategoryParseError,
    CategorySchemaError,
    CategorySpec,
    bundled_category,
    cyclic_group_category,
    load_category,
)
from .duality import (
    DualityPack,
    closure,
    coev,
    conjugate,
    cup_R,
    cup_S,
    dual,
    dual_and_conjugate,
    duality_pack,
    ev,
    fourier,
    inner_product,
    onb_and_isom,
    partial_trace,
)
from .morphism import (
    Letter,
    Morphism,
    ObjectHandle,
    adjoint,
    canonical_iso,
    compose,
    defect,
    hom_dim,
    identity,
    inverse,
    letter,
    random_morphism,
    simple,
    tensor,
    tree_vector,
    unit_object,
    with_source,
    word,
    zero,
)
