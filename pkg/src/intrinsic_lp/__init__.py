"""Intrinsic Littlewood-Paley square functions on Musielak-Orlicz Morrey and
Campanato spaces, computed on 1D/2D grids."""

__version__ = "0.1.0"

from .grid_core import (Ball, BallFamily, BallOffGrid, Grid, GridFunction, HalfSpaceGrid, ball_indices,
                        ball_measure, ess_inf_on_ball, integrate_ball, mean_on_ball, read_csv, write_csv)
from .growth import (ComplementaryDiverges, GrowthFunction, OuterFunction, TypeViolation, Weight,
                     YoungFunction, complementary, muckenhoupt_constant, normalized_psi,
                     phi_decreasing_check, phi_dini_check, phi_inverse_composite_check,
                     reverse_holder_constant, type_constant, young_complementary_inverse, young_inverse)
from .intrinsic import (ConeParams, KernelGrid, KernelLP, OperatorParams, a_alpha_field, commutator_g,
                        commutator_gstar, commutator_s, g_alpha, g_star_lambda, kernel_decay_check,
                        kernel_dictionary, kernel_lp_max, refined_dictionary_value, s_alpha, s_alpha_beta)
from .norms import (SpaceSpec, bmo_norm, campanato_norm, campanato_star_norm, classical_morrey_norm,
                    complementary_norm_ball, generalized_holder_check, john_nirenberg_constant,
                    luxembourg_norm_ball, morrey_norm, space_norm, weighted_orlicz_morrey_norm)
from .verify import (Corpus, SuiteConfig, TheoremSuite, boundedness_ratio, campanato_suite, emit_report,
                     hypothesis_report, lemma41_tail_check, tail_estimate_check, run_suite)
