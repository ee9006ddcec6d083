"""rig_lab: planted-clique recovery in noisy random intersection graphs."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    RigParams,
    TwoSidedParams,
    RigInstance,
    delta_from_params,
    two_sided_delta,
    sample_rig,
    sample_two_sided,
    densify,
    plant_clique_reduction,
)
from .graphs import Graph  # noqa: F401
