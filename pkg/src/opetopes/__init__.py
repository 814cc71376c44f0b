"""Opetopes as zoom complexes of constellations, and the polynomial tower that counts them."""

from __future__ import annotations

from .calculus import (
    Recipe,
    compose_recipe,
    contract_sphere,
    draw_sphere,
    erase_sphere,
    facet_of_facet_multiplicities,
    facet_pairs,
    fill,
    glue,
    restrict_to_sphere,
    source,
    sources,
    target,
)
from .constellation import (
    Constellation,
    SphereFamily,
    enumerate_constellations,
    from_spheres,
    layer_content,
    to_spheres,
    validate_constellation,
)
from .correspondence import (
    cross_check_sources_targets,
    in_tower,
    opetope_to_term,
    slice_twice_check,
    term_to_opetope,
    tower_vs_enumerate,
)
from .dot import to_dot
from .errors import OpetopeError, ParseError, ValidationError
from .opetope import (
    Level,
    Opetope,
    ZoomComplex,
    arrow,
    automorphisms,
    canonical_form,
    canonical_rename,
    composition_tree,
    desuspend,
    drop_over,
    enumerate_opetopes,
    equals,
    from_trees,
    glob_over,
    globe,
    is_opetope,
    point,
    stable_representative,
    suspend,
    validate_opetope,
    validate_zoom_complex,
)
from .polyfun import (
    BaezDolan,
    FreeMonoidMonad,
    IdentityMonad,
    PolyFunctor,
    PolyMonad,
    TableMonad,
    baez_dolan,
    check_monad_laws,
    opetope_tower,
    p_trees,
    tower_monad,
)
from .trees import SubdividedTree, Tree, canonical_code, is_kernel, unit_tree, validate_tree
from .xmlformat import parse, serialize

__version__ = "0.1.0"
