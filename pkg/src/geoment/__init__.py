"""Geometric entanglement of n-qubit pure states.

Two routes to the entanglement eigenvalue: a classical dense-tensor power
iteration (`hopm`) and a simulated measurement-driven pipeline (`qhopm`)
built from Hadamard-test tomography, with shot sampling, an analytic
depolarising-noise model and post-hoc mitigation.
"""

from .circuits import Circuit, Gate, TargetSpec, adjoint, build_separable, build_target, compose, controlled, depth
from .errors import DegenerateUpdate, MitigationOverflow, NegativeRate
from .hopm import SolverConfig, SolverResult, hopm, multistart_lambda, schmidt_lambda_bipartite
from .mitigation import NoiseParams, estimate_p, mitigate
from .qhopm import QhopmRun, RunSummary, measure_lambda, run_qhopm, summarize
from .simulator import AncillaExpectations, DepolarizingNoise, MeasurementBackend, hadamard_test, overlap_amplitude, run
from .tensors import QubitAngles, StateTensor, angles_to_vector, full_contraction, n_mode_product_skip, vector_to_angles
from .tomography import TomographyResult, recover_qubit

__version__ = "0.1.0"

__all__ = [
    "AncillaExpectations",
    "Circuit",
    "DegenerateUpdate",
    "DepolarizingNoise",
    "Gate",
    "MeasurementBackend",
    "MitigationOverflow",
    "NegativeRate",
    "NoiseParams",
    "QhopmRun",
    "QubitAngles",
    "RunSummary",
    "SolverConfig",
    "SolverResult",
    "StateTensor",
    "TargetSpec",
    "TomographyResult",
    "adjoint",
    "angles_to_vector",
    "build_separable",
    "build_target",
    "compose",
    "controlled",
    "depth",
    "estimate_p",
    "full_contraction",
    "hadamard_test",
    "hopm",
    "measure_lambda",
    "mitigate",
    "multistart_lambda",
    "n_mode_product_skip",
    "overlap_amplitude",
    "recover_qubit",
    "run",
    "run_qhopm",
    "schmidt_lambda_bipartite",
    "summarize",
    "vector_to_angles",
]
