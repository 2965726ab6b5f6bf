"""Simulation and analysis toolkit for a nonbinary quantum signature scheme
built on fingerprinting states with substring reveal."""

from .analysis import (OutcomeDistribution, figures_of_merit, genuine_accept_probability,
                       repudiation_probability, set_parameters, sweep)
from .adversary import ForgeryModel, p1_bound
from .coding import CodeSpec, encode
from .conjecture import check_monotonic, check_range, f_exact
from .errors import (DimensionError, DomainError, InsecureParametersError, ParameterError,
                     QsigError, ResourceError, SweepError)
from .fingerprint import accept_probability, dense_mu, dense_psi, index_set
from .gc import GCParams, gc_summary
from .protocol import SchemeParams, Verdict, keygen, run_trials, sign, verify_simulate

__version__ = "0.1.0"

__all__ = [
    "CodeSpec", "DimensionError", "DomainError", "ForgeryModel", "GCParams",
    "InsecureParametersError", "OutcomeDistribution", "ParameterError", "QsigError",
    "ResourceError", "SchemeParams", "SweepError", "Verdict", "accept_probability",
    "check_monotonic", "check_range", "dense_mu", "dense_psi", "encode", "f_exact",
    "figures_of_merit", "gc_summary", "genuine_accept_probability", "index_set",
    "keygen", "p1_bound", "repudiation_probability", "run_trials", "set_parameters",
    "sign", "sweep", "verify_simulate",
]
