"""Spectra of Pisot-cyclotomic numbers with polygonal digit alphabets."""

from .cyclotomic import (
    Alphabet,
    BaseSpec,
    CyclotomicInt,
    DELONE_CASES,
    base_catalog,
    delone_bases,
    get_base,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "BaseSpec",
    "CyclotomicInt",
    "DELONE_CASES",
    "base_catalog",
    "delone_bases",
    "get_base",
    "__version__",
]
