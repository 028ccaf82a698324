"""Type-1 and interval type-2 fuzzy inference with EIASC type-reduction."""

__version__ = "0.1.0"

from .sets import (GaussianT1, GaussianUncertainMeanIT2, GaussianUncertainStdIT2,
                   TrapezoidIT2, TrapezoidT1, it2_membership_interval, t1_membership)
from .rulebase import (CrispConstant, CrispInterval, FiringInterval, FuzzySystem,
                       InputVariable, IntervalLinear, Linear, Reducer, Rule,
                       consequent_value, fire_it2, fire_t1, validate_system)
from .reduction import (AllZeroFiring, ReductionResult, bmm_defuzz, corner_oracle,
                        cos_defuzz, eiasc, evaluate, evaluate_batch, nt_defuzz,
                        t1_weighted_average)
from .analysis import coverage_report, param_count, surface_sample
from .optimize import (Dataset, OptimizerConfig, blur_to_it2, optimize_it2, optimize_t1,
                       rmse, two_step)
from .io import load_system, parse_system_definition, serialize_system

__all__ = [name for name in dir() if not name.startswith("_")]
