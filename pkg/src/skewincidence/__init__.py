from .algebra import AlgebraContext, SkewElement
from .coeff_ring import RingElement, RingSpec, parse_ring_spec
from .isomorphism import RingIsoWitness, build_psi, recover_poset_map, verify_ring_iso
from .poset import Poset, enumerate_posets, poset_from_covers, poset_isomorphisms
from .structure import diagonalize_idempotent, invert_elem
