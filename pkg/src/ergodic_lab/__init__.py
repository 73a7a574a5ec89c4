"""Averaging operators with arithmetic weights, their exponential-sum
symbols, and desk-scale numerical verification harnesses."""

from .arithmetic import (ArithTables, build_tables, mangoldt, mangoldt_table,
                         ramanujan_sum, ramanujan_sum_brute)
from .circle import (ArcScanReport, FareySet, MajorArcSpec, NumericError,
                     RationalFrequency, bump_eta, continuous_symbol,
                     exp_sum_m, farey_set, gauss_sum, height, iw_constant,
                     major_arc_scan, project_signal, projection_multiplier,
                     projection_pi)
from .gowers import UNormEstimate, u_norm_estimate, weight_unorm_gap
from .padic import (CyclicSignal, char_eigenvalues, fiber_count_norm,
                    fiber_profile, full_group_average, linear_unit_average,
                    operator_norm_probe, unit_group_average)
from .polynomials import PolynomialFamily, parse_family, parse_polynomial
from .rotation import (ConvergenceReport, RotationSystem, TrigPolynomial,
                       convergence_series, parse_trig, prime_vs_mangoldt_gap,
                       rotation_average)
from .signals import SignalZ, dual_average, inner_product, multi_average
from .variation import (LacunarySet, RMCheckReport, VariationProfile,
                        dyadic_scales, rm_check, variation_norm,
                        variation_profile)
from .weights import (CramerWeight, DifferenceWeight, HeathBrownWeight,
                      ScaleLinkedCramerWeight, UnitWeight, VonMangoldtWeight,
                      Weight, WeightStatistics, cramer_weight,
                      cramer_weight_factored, heath_brown_weight,
                      parse_weight, scale_linked_cramer, weight_statistics)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
