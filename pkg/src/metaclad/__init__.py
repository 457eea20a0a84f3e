"""metaclad: semi-analytic EM toolkit for impedance-metasurface claddings.

Closed-form cylindrical mode matching for a circular receiver wrapped in
an admittance sheet, plus the analysis layers built on it: admittance
plane enhancement sweeps with resonance classification, field maps,
secrecy-outage statistics, and harvesting chain budgets.
"""

__version__ = "0.1.0"

from .errors import ConvergenceError, InfeasibleTargetError, SingularHarmonicError
from .scene import (
    ETA0,
    Scene,
    classify_admittance,
    equivalent_slab_permittivity,
    lambertian_gain,
    scene_from_dict,
    scene_from_json,
    scene_to_dict,
    slab_equivalent_admittance,
)
from .mode_matching import (
    PowerMetric,
    ScatteringSolution,
    absorbed_power,
    boundary_residuals,
    dominant_order,
    enhancement,
    evaluate_points,
    field_at,
    interior_power,
    radial_flux,
    solve,
)
from .sweep import (
    EnhancementKernel,
    Resonance,
    SweepGrid,
    SweepSpec,
    build_kernel,
    find_maxima,
    sweep,
)
from .field_map import (
    FieldMap,
    angular_profile,
    count_circular_maxima,
    intensity_map,
)
from .pls import (
    GainPattern,
    LinkModel,
    SecrecyLink,
    coating_gain_pattern,
    max_distance_ratio,
    ring_secrecy_fraction,
    sop_closed_form,
    sop_monte_carlo,
    sop_spatial_map,
)
from .eh_network import (
    ChainNode,
    HarvestReport,
    chain_energy_budget,
    chain_from_json,
    harvested_power,
    link_received_power,
)
from .presets import (
    OPTIMAL_1,
    OPTIMAL_1_ENHANCEMENT,
    OPTIMAL_1_ORDER,
    OPTIMAL_2,
    OPTIMAL_2_ENHANCEMENT,
    OPTIMAL_2_ORDER,
    REFERENCE_SCENE,
)

__all__ = [
    "ETA0",
    "ChainNode",
    "ConvergenceError",
    "EnhancementKernel",
    "FieldMap",
    "GainPattern",
    "HarvestReport",
    "InfeasibleTargetError",
    "LinkModel",
    "OPTIMAL_1",
    "OPTIMAL_1_ENHANCEMENT",
    "OPTIMAL_1_ORDER",
    "OPTIMAL_2",
    "OPTIMAL_2_ENHANCEMENT",
    "OPTIMAL_2_ORDER",
    "PowerMetric",
    "REFERENCE_SCENE",
    "Resonance",
    "ScatteringSolution",
    "Scene",
    "SecrecyLink",
    "SingularHarmonicError",
    "SweepGrid",
    "SweepSpec",
    "absorbed_power",
    "angular_profile",
    "boundary_residuals",
    "build_kernel",
    "chain_energy_budget",
    "chain_from_json",
    "classify_admittance",
    "coating_gain_pattern",
    "count_circular_maxima",
    "dominant_order",
    "enhancement",
    "equivalent_slab_permittivity",
    "evaluate_points",
    "field_at",
    "find_maxima",
    "harvested_power",
    "intensity_map",
    "interior_power",
    "lambertian_gain",
    "link_received_power",
    "max_distance_ratio",
    "radial_flux",
    "ring_secrecy_fraction",
    "scene_from_dict",
    "scene_from_json",
    "scene_to_dict",
    "slab_equivalent_admittance",
    "solve",
    "sop_closed_form",
    "sop_monte_carlo",
    "sop_spatial_map",
    "sweep",
]
