"""Finite-field hypergeometric functions, q-series, Hecke eigenforms and their
mod-p congruences."""

from .errors import HypmodError
from .field import build_field, char_from_rational, gauss_sum, jacobi_sum, make_backend
from .hecke import FAMILIES, get_family, reproduce_table, verify_eigenform
from .hypergeometric import P_HD, appell_F1, appell_F2, greene_F, hd_k4, hd_k5, make_datum
from .numberfield import nf_make
from .qseries import FormalQSeries, eta_series, k4_series, k5_series, verify_identity
from .verify import sweep

__version__ = "0.1.0"

__all__ = [
    "HypmodError", "build_field", "char_from_rational", "gauss_sum", "jacobi_sum",
    "make_backend", "FAMILIES", "get_family", "reproduce_table", "verify_eigenform",
    "P_HD", "appell_F1", "appell_F2", "greene_F", "hd_k4", "hd_k5", "make_datum",
    "nf_make", "FormalQSeries", "eta_series", "k4_series", "k5_series",
    "verify_identity", "sweep",
]
