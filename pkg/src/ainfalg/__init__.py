"""Exact computations with finite-dimensional DG and A-infinity algebras."""

from .ainf import AInfAlgebra, homotopy_transfer, minimal_model, normalize_unitality, verify_ainf
from .algebra import GradedAlgebra, make_algebra, path_algebra, verify_algebra
from .dg import DgAlgebra, dg_radical_ideals, truncate_connective, verify_dg
from .errors import AlgebraError, ParseError
from .field import GF, QQ
from .filtration import compute_filtration, detect_infinite
from .hochschild import ext_window, hochschild_window
from .invariants import k0_quotient_compare, k0_rank, motive_report
from .io import load, load_corpus, parse, serialize
from .smoothness import smoothness_probe
from .trees import count_psi, enumerate_psi, iter_psi

__version__ = "0.1.0"
