"""Schemmel totient functions and certified enumeration of their sparse values."""

__version__ = "0.1.0"

from .arith import (FactoredInteger, PrimeTable, SrTable, base_index, factorize,
                    in_coprimality_class, nth_prime, primorial, schemmel,
                    schemmel_by_count, sieve_sr_range)
from .certify import (EnumerationCertificate, FrRecord, TailBound, enumerate_sparsely,
                      is_sparsely, tail_lower_bound)
from .jacobsthal import JacobsthalRecord, jacobsthal_of_primorial

__all__ = [
    "FactoredInteger", "PrimeTable", "SrTable", "base_index", "factorize",
    "in_coprimality_class", "nth_prime", "primorial", "schemmel", "schemmel_by_count",
    "sieve_sr_range", "EnumerationCertificate", "FrRecord", "TailBound",
    "enumerate_sparsely", "is_sparsely", "tail_lower_bound", "JacobsthalRecord",
    "jacobsthal_of_primorial",
]
