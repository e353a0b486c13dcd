"""Random surfaces: height functions on Z^m with a height-axis potential.

Submodules:

* ``lattice``    finite regions of Z^m, adjacency, distances, boundaries
* ``heights``    height functions, extendability, extension sets
* ``potential``  the random environment on height-axis edges
* ``gibbs``      quenched and annealed Gibbs measures, structure identities
* ``sampler``    exact sampling and heat-bath dynamics (single site and
                 checkerboard sweeps)
* ``analysis``   stochastic dominance, martingale audits, concentration
                 experiments
* ``cli``        the ``randomsurfaces`` command line tool
"""

from . import analysis, cli, gibbs, heights, lattice, potential, sampler
from .heights import (
    ExtensionSet,
    HeightFunction,
    NoExtensionError,
    enumerate_extensions,
    kirszbraun_extendable,
    min_max_extensions,
)
from .lattice import Region, make_box
from .potential import Potential, PotentialModel, sample_potential
from .gibbs import QuenchedMeasure, annealed_expectation, quenched_measure

__version__ = "0.1.0"

__all__ = [
    "analysis",
    "cli",
    "gibbs",
    "heights",
    "lattice",
    "potential",
    "sampler",
    "Region",
    "make_box",
    "HeightFunction",
    "ExtensionSet",
    "NoExtensionError",
    "enumerate_extensions",
    "kirszbraun_extendable",
    "min_max_extensions",
    "Potential",
    "PotentialModel",
    "sample_potential",
    "QuenchedMeasure",
    "quenched_measure",
    "annealed_expectation",
    "__version__",
]
