from .instance import (HlmrfInstance, LinearPotential, SolverConfig,
                       dump_potentials, load_instance, load_potentials)
from .solve import (MapResult, brute_force_map, energy, grad_x, grad_y,
                    map_infer, soft_energy)

__all__ = [
    "HlmrfInstance", "LinearPotential", "SolverConfig",
    "dump_potentials", "load_instance", "load_potentials",
    "MapResult", "brute_force_map", "energy", "grad_x", "grad_y",
    "map_infer", "soft_energy",
]
