"""Train one-hidden-layer neural-network classifiers with particle swarms.

PPSO (Sobol initialisation plus a tanh-increasing inertia weight) is the main
optimiser; BPSO, SGPSO, GSA and PSOGSA are provided as baselines.
"""
from ._accel import USE_NUMBA, backend_name
from .network import Topology, decode, encode, forward, mse_fitness, predict, total_error
from .swarm import InertiaSchedule, SwarmConfig, inertia_at, run_pso
from .gravsearch import GsaConfig, run_gsa, run_psogsa

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA", "backend_name",
    "Topology", "decode", "encode", "forward", "mse_fitness", "predict", "total_error",
    "InertiaSchedule", "SwarmConfig", "inertia_at", "run_pso",
    "GsaConfig", "run_gsa", "run_psogsa",
]
