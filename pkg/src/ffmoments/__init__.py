"""Exact quadratic-character L-polynomials over F_q[T], with family sweeps
for shifted moments and character-sum moments against their bound shapes."""

from .galois import FieldSpec, Poly, enumerate_monic, field, monic_from_index, poly_gcd
from .kernel import active_kernel
from .lfunction import LPolynomial, SpectralPoint, lpoly_direct, lpoly_euler, rh_check, zeta_a
from .moments import MomentReport, MomentSpec, bar_theta, shifted_moment, theorem1_bound
from .charsums import CharSumSpec, char_prefix_sum, circle_integral_moment, s_m_moment, theorem2_bound
from .primes import PrimeTable, build_prime_table, enumerate_H, factorize, is_irreducible, is_squarefree
from .characters import QuadraticCharacter, chi_eval, jacobi, legendre_prime

__version__ = "0.1.0"
