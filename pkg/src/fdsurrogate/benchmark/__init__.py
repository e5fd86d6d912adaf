"""Test-problem suite, data profiles and the experiment runner."""

from .experiment import ExperimentConfig, load_config, parse_config, run_experiment
from .problems import TestProblem, convex_quadratics, default_suite, get_problems
from .profiles import (MismatchedProblemSets, ProfileTable, converged, data_profile,
                       evals_to_converge, gain_distribution)
