"""Exact arithmetic: prime fields, polynomials, reconstruction, resultants."""
from .domains import QQ, GF, PrimeField, RationalField
from .primes import is_prime, prime_pool
from .polymul import mul_mod, mul_z, ntt_mul, schoolbook_mul
from .dense import DensePoly, interpolate, poly_gcd, poly_resultant, poly_xgcd
from .ratfunc import RatFunc, clear_denominators, common_denominator
from .recon import crt_combine, rat_interp, rat_interp_adaptive, rational_reconstruct, symmetric
from .multipoly import MultiPoly, divides
from .resultant import ResultantError, resultant, sylvester_matrix, sylvester_resultant

__all__ = [
    "QQ", "GF", "PrimeField", "RationalField", "is_prime", "prime_pool",
    "mul_mod", "mul_z", "ntt_mul", "schoolbook_mul",
    "DensePoly", "interpolate", "poly_gcd", "poly_resultant", "poly_xgcd",
    "RatFunc", "clear_denominators", "common_denominator",
    "crt_combine", "rat_interp", "rat_interp_adaptive", "rational_reconstruct", "symmetric",
    "MultiPoly", "divides", "ResultantError", "resultant", "sylvester_matrix",
    "sylvester_resultant",
]
