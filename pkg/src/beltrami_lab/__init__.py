"""Contact structures of curl eigenfields on the round 3-sphere and the flat 3-torus."""

from .contact import ContactReport, Verdict, giroux_classify
from .hopf_invariant import hopf_class_Vm, whitehead_hopf_invariant
from .orthopoly import Polynomial, char_poly
from .sphere_fields import AxisymmetricField, build_Vm, curl_axisymmetric, min_norm
from .torus_fields import TorusField, WaveSpec, build_Vk, eta_m

__all__ = [
    "AxisymmetricField",
    "ContactReport",
    "Polynomial",
    "TorusField",
    "Verdict",
    "WaveSpec",
    "build_Vk",
    "build_Vm",
    "char_poly",
    "curl_axisymmetric",
    "eta_m",
    "giroux_classify",
    "hopf_class_Vm",
    "min_norm",
    "whitehead_hopf_invariant",
]

__version__ = "0.1.0"
