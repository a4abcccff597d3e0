"""abelkit: counting decompositions of Abelian surfaces into products of elliptic curves."""

__version__ = "0.1.0"

from .counting import DecompCounts, Rho2, Rho3, Rho4, count, weak_delta_tilde_oracle
from .discform import FiniteQuadraticForm, GuardExceeded, disc_form_of, global_order
from .genus import genus_of
from .qform import EvenBinaryLattice, class_number, reduce

__all__ = [
    "DecompCounts", "Rho2", "Rho3", "Rho4", "count", "weak_delta_tilde_oracle",
    "FiniteQuadraticForm", "GuardExceeded", "disc_form_of", "global_order",
    "genus_of", "EvenBinaryLattice", "class_number", "reduce",
]
