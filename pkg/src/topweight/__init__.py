"""Top-weight Euler characteristics of moduli spaces of marked curves.

Computes the symmetric generating function z_g both from its closed
formula and by brute-force sums over graphs and their automorphisms.
"""
from .arith import Partition, bernoulli, divisors, moebius, partitions_of, prime_divisors, totient
from .symfunc import PLaurent, PSeries, SchurTable, mn_character, schur_expand
from .zagier import ZagierTerm, enumerate_terms, top_weight_euler, top_weight_euler_closed, z_series

__version__ = "0.1.0"
