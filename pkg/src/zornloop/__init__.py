"""Exact arithmetic in the Zorn vector-matrix algebra and its Moufang loops.

Submodules:

- ``ring``: gcd, CRT, factorization, unimodular shifts
- ``zorn``: matrices, product, determinant, inverse, named generators
- ``expr``: parenthesization trees certifying factorizations
- ``factor``: factorizations of unital and congruence matrices
- ``wohl``: splitting A = B C with B of one level and C of another
- ``quotient``: the finite loops SLL(2, Z/mZ)
- ``floop``: subloops, cosets, Lagrange and normality checks
"""
from .errors import (DegenerateV, InvalidSL2, LagrangeFails, ModulusMismatch, NotCoprime,
                     NotDivisor, NotInGamma, NotInvertible, NotUnimodular,
                     PreconditionViolated, TooLarge, ZornError)
from .expr import Conj, ExprTree, Leaf, Mul, certify_level, evaluate, leaves, tree_size
from .factor import decompose_congruence, factor_unital, sl2_factor, split_gamma1_delta
from .floop import (CheckResult, closure, coset, delta_image, derived_subloop,
                    gamma_ns_image, index_or_cosets, lagrange_check, normal_closure,
                    normality_check, power_closure)
from .quotient import (FiniteLoop, SubloopSet, count_sll, crt_iso_check, enumerate_sll,
                       index_gamma, kernel_subloop)
from .ring import crt, ext_gcd, factor_int, mod_inv, unimodular_shift
from .wohl import delta_level_join, wohlfahrt_split
from .zorn import (I, EmbeddedSL2, LowerElementary, Sj, Tj, Uj, UpperElementary, Vec3,
                   ZornMatrix, associator, commutator, gamma_membership, generator,
                   is_gll, is_sll, moufang_report, reduce_mod, zadd, zdet, zinv, zmul,
                   zneg)

__version__ = "0.1.0"
