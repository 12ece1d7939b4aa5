"""Constant-dimension subspace codes over finite fields.

Finite-field linear algebra, Grassmannian geometry and its association
scheme, Gabidulin rank-metric codes, lifted and augmented KK codes with
their decoders, covering-code bounds, and a seeded channel simulator.
"""

from .ff import GF, FiniteField, FqMatrix, LinearizedPoly, extension_field, rank, rref
from .grassmann import (GrassmannProfile, ResourceLimitError, Subspace, ball_intersection,
                        ball_volume, dual, eberlein, enumerate_grassmannian, gaussian_binomial,
                        injection_distance, intersection_number_eberlein,
                        intersection_number_recursive, profile, sphere_size, subspace_distance,
                        union_volume_bound, vc_bounds_check)
from .rank_metric import MrdCode, RankCodebook, build_mrd, mrd_decode_rank, mrd_encode, rank_distance
from .constructions import (AugmentedKK, Cdc, LiftedCode, PivotSet, augmented_kk, extend_dimension,
                            extend_length, kk_code, lift, permuted_lift, permuted_lifting_covering,
                            skachek_cardinality)
from .decoders import decode_augmented, ebdd, kk_bounded_decode, nearest_codeword_oracle
from .covering import bounds_report, covering_radius, exact_kc_small
from .channel import ChannelSpec, ExperimentReport, perturb, run_experiment

__version__ = "0.1.0"
