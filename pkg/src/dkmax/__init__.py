"""Maximal order of the generalized divisor function d_k via superior k-highly composite numbers."""

__version__ = "0.1.0"

from .divisor import FactoredNat, d_k, f_k  # noqa: E402
from .maximizer import LambdaResult, find_lambda  # noqa: E402
from .primes import PrimeTable, build_prime_table  # noqa: E402

__all__ = [
    "FactoredNat",
    "LambdaResult",
    "PrimeTable",
    "__version__",
    "build_prime_table",
    "d_k",
    "f_k",
    "find_lambda",
]
