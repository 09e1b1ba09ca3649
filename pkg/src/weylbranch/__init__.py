"""weylbranch: exact weight arithmetic and branching checks for classical groups."""

from .rootsys import LieType, RootSystem, build_root_system, minimal_weights, pairing
from .charcalc import Characteristic, CharacterTable, freudenthal, irr_dim, weyl_dim
from .embeddings import Embedding, GeomFamily, build_embedding, geom_family, restrict_weight
from .checker import BranchReport, ClassificationEntry, branch_p0, scan_candidates, verify_entry

__version__ = "0.1.0"

__all__ = [
    "LieType",
    "RootSystem",
    "build_root_system",
    "minimal_weights",
    "pairing",
    "Characteristic",
    "CharacterTable",
    "freudenthal",
    "weyl_dim",
    "irr_dim",
    "Embedding",
    "GeomFamily",
    "geom_family",
    "build_embedding",
    "restrict_weight",
    "BranchReport",
    "ClassificationEntry",
    "branch_p0",
    "verify_entry",
    "scan_candidates",
    "__version__",
]
