"""Desk-scale workbench for p-adic L-functions over imaginary quadratic fields.

Modules: ``padic`` (rings Z_p[zeta_{p^m}]), ``series`` (truncated power
series, Weierstrass preparation), ``iwasawa`` (measures on Z_p^2-extensions),
``quadforms`` (orders and class groups), ``characters`` (Hecke characters),
``curves`` and ``lfunction`` (Rankin-Selberg central values), ``basechange``
(Weierstrass degrees along the cyclotomic tower), ``verify`` and ``cli``.
"""

from .errors import (
    InsufficientPrecision,
    InsufficientTruncation,
    InvalidParameter,
    OutOfDomain,
    PrecisionError,
    TowerError,
)
from .padic import PadicElement, PadicRing, make_ring, root_of_unity
from .series import (
    INFINITE,
    TruncatedSeries1,
    TruncatedSeries2,
    check_degree_relation,
    content_factor,
    specialize_axis,
    weierstrass_prepare,
)

__version__ = "0.1.0"

__all__ = [
    "INFINITE",
    "InsufficientPrecision",
    "InsufficientTruncation",
    "InvalidParameter",
    "OutOfDomain",
    "PadicElement",
    "PadicRing",
    "PrecisionError",
    "TowerError",
    "TruncatedSeries1",
    "TruncatedSeries2",
    "check_degree_relation",
    "content_factor",
    "make_ring",
    "root_of_unity",
    "specialize_axis",
    "weierstrass_prepare",
]
