"""Tools for the top of the primitive-positive constructability order on
finite digraphs: cores, homomorphisms, polymorphism conditions,
rectangularity, pp powers, and the classification built from them."""

from ._kernel import available_backends, backend_name
from .digraph import (
    DEFAULT_VERTEX_BUDGET,
    Digraph,
    ShapeReport,
    build,
    clique,
    cycle,
    direct_power,
    disjoint_union,
    gen_family,
    path,
    shape_of,
    transitive_tournament,
)
from .homsearch import (
    DEFAULT_NODE_LIMIT,
    EquivalenceResult,
    Hom,
    SearchBudget,
    core_of,
    find_hom,
    hom_equivalent,
    is_core,
)
from .serialize import decode, encode

__version__ = "0.1.0"
