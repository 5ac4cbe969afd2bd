"""cmprox: p-adic proximity computations around CM points on modular curves."""

__version__ = "0.1.0"

from .errors import (CmproxError, DegenerateMatrix, Inconclusive, NonSmoothPoint,
                     NotInIdealAtCap, PrecisionExhausted, PrecisionFailure,
                     ResourceLimit)
from .padic import (PadicNumber, UnramifiedRing, approximation_exponent,
                    frobenius, padic_log, ring, teichmuller)
from .polyroots import (IntegerPolynomial, NewtonPolygon, PadicPolynomial,
                        hensel_lift, newton_polygon, padic_roots,
                        roots_in_unramified)
from .quadratic import (class_group, class_number, is_fundamental_discriminant,
                        kronecker, reduction_type, representation_count)
from .classpoly import hilbert_class_poly, singular_moduli_at
from .modular import (IdealPresentation, Magnitude, ModularPolynomial,
                      MultiPoly, OrdinaryModulus, distance, hecke_image_point,
                      modular_poly, psi, rigidity_threshold_check)
from .galois import construct_conjugator, log_order_predicate
from .quaternion import (EisensteinNumber, QuaternionElement, construct_phi,
                         gram_matrix, standard_basis)
from .sieve import SieveConfig, count_N, euler_product_c, minimal_admissible_x
from .experiments import (run_prop_approximate, run_rigidity_scan,
                          run_selftest, run_sieve, run_warmup_2adic)
