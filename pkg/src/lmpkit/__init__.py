"""Symbolic workbench for labelled Markov processes over finitely generated spaces."""

from .bisim import (Obstruction, StabilityReport, StateBisimReport, brute_force_largest_bisimulation,
                    check_state_bisimulation, event_bisimilarity, is_stable,
                    largest_state_bisimulation, semipullback_obstruction, smallest_stable_algebra)
from .certificate import Certificate, prove_not_state_bisimilar, verify_certificate
from .enumeration import RATIONAL_INTERVALS, SeparatingFamilyDescriptor, separation_witness
from .errors import LmpError
from .fullmodel import FullModel
from .gallery import (GalleryConfig, build_full_pair_sum, build_full_s3, build_s3, build_s3_minus,
                      build_sum_example, build_T, build_theorem3_cospan,
                      build_unclosable_cospan, build_Tprime)
from .intervals import Interval, IntervalSet
from .lmp import (SymbolicLMP, check_zigzag, lmp_sum, quotient_by_subalgebra, restrict_lmp,
                  validate_lmp)
from .logic import (And, Diamond, Top, enumerate_formulas, eval_formula, logical_equivalence,
                    parse_formula, render_formula)
from .measure import (BaseMeasure, InnerOuterTable, MeasureValue, VMassProfile,
                      disagreeing_extensions, inner_measure, inner_outer, lebesgue,
                      lower_extension, outer_measure, upper_extension)
from .sigma import (AtomPartition, CarrierDescriptor, GeneratorSet, PartitionRelation,
                    SigmaSubalgebra, extend_by_abstract_set, r_closed_sets, relation_of_family,
                    sigma_closure, sum_spaces)

__all__ = [name for name in dir() if not name.startswith("_")]
