"""Finite-model laboratory for crossed-module valued cohomology and
groupoid extensions over combinatorial covers."""

from .fingroup import (
    AutGroup,
    FiniteGroup,
    GroupHom,
    automorphism_group,
    check_hom,
    cyclic_group,
    enumerate_isomorphisms,
    group_from_table,
    group_hom,
    symmetric_group,
    trivial_group,
)
from .xmod import (
    CrossedModule,
    TwoGroupArrow,
    act,
    inner_xmod,
    two_group_arrow,
    two_group_hcomp,
    two_group_vcomp,
    validate_crossed_module,
)
from .cech import (
    CommonRefinement,
    Cover,
    FiniteGroupoid,
    GroupoidMorphism,
    Refinement,
    cech_groupoid,
    common_refinement,
    cover,
    cover_from_cech,
    is_gen_surj_subm,
    pair_groupoid,
    pullback_groupoid,
    singleton_cover,
    trivial_groupoid,
    validate_refinement,
)
from .cocycle import (
    Cocycle,
    Coboundary,
    apply_coboundary,
    coboundary,
    coboundary_relates,
    enumerate_cocycles,
    h1_classes,
    identity_coboundary,
    pullback_cocycle,
    relating_coboundaries,
    same_class_after_refinement,
    trivial_cocycle,
    validate_cocycle,
)
from .extension import (
    ExtIso,
    GHExtension,
    adapt,
    band_of,
    cocycle_from_adapted,
    coboundary_from_iso,
    extension_from_cocycle,
    is_adapted,
    iso_from_coboundary,
    relabel_carriers,
    two_group_cocycle,
    validate_ext_iso,
    validate_gh_extension,
)
from .morita import (
    BaseMorita,
    ExtOverBase,
    MoritaWitness,
    base_morita,
    compose_base_morita,
    compose_morita,
    extensions_morita_equivalent,
    generalized_pullback_witness,
    gerbe_class,
    iso_witness,
    over_point_base,
    pullback_extension,
    pullback_witness,
    reverse_base_morita,
    transport,
    validate_morita_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
