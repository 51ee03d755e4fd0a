"""Exact arithmetic for skew Ore polynomial rings R(x; sigma, delta) over finite rings,
inverse-polynomial modules M[x^-1] and the dimension theory of their finite truncations."""

__version__ = "0.1.0"

from .errors import CapExceededError, InvalidSpecError, LawViolationError, OredimError  # noqa: E402
from .rings import FiniteRing, RingMap, build_ring, dual_maps  # noqa: E402
from .skew import InverseRingPoly, SkewOreRing, SkewPoly  # noqa: E402
from .modules import FiniteModule, InversePoly, TruncatedInverseModule, truncate  # noqa: E402
from .lattice import SubmoduleLattice, corank, rudim, submodules  # noqa: E402
from .compat import CompatReport, is_completely_compatible  # noqa: E402

__all__ = [
    "CapExceededError", "CompatReport", "FiniteModule", "FiniteRing", "InvalidSpecError",
    "InversePoly", "InverseRingPoly", "LawViolationError", "OredimError", "RingMap",
    "SkewOreRing", "SkewPoly", "SubmoduleLattice", "TruncatedInverseModule", "build_ring",
    "corank", "dual_maps", "is_completely_compatible", "rudim", "submodules", "truncate",
    "__version__",
]
