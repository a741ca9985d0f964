from .__version__ import __version__
from .auxiliary import (Sampler, SigmaRange, check_basis_independence,
                        diagonal_restriction, eval_F, hausdorff, sample_image,
                        sample_union)
from .cloud import ImageCloud
from .equivalence import (EquivalenceVerdict, Tolerances,
                          brute_force_equivalence, check_equivalence, twist)
from .exponents import (BasisSpec, BohrError, ExponentVector, RationalMatrix,
                        basis_from_log_integers, integralize, left_kernel,
                        resolve_exponent)
from .sums import (ExponentialSum, Strip, bochner_fejer, evaluate,
                   vertical_line_samples)
