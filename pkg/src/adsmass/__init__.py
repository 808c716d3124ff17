"""Rest mass of asymptotically AdS charge data, with numerical checks of the
so(3,2) and Clifford algebra structures it rests on."""

from .clifford import spinor_preimage, spinor_to_killing
from .errors import AdsMassError
from .geometry import min_norm
from .killing_sets import hull_decompose, hull_witness, is_observer, is_spinor_killing
from .mass import energy_matrix, optimal_observer, rest_mass, rest_mass_numeric
from .so32 import ConservedCharges, KillingField, invariants

__all__ = [
    "AdsMassError",
    "ConservedCharges",
    "KillingField",
    "energy_matrix",
    "hull_decompose",
    "hull_witness",
    "invariants",
    "is_observer",
    "is_spinor_killing",
    "min_norm",
    "optimal_observer",
    "rest_mass",
    "rest_mass_numeric",
    "spinor_preimage",
    "spinor_to_killing",
]

__version__ = "0.1.0"
