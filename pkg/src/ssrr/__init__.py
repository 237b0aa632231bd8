"""Shock polars, regular-reflection states and subsolution certificates
for self-similar compressible potential flow."""

from .gas import (
    GasModel,
    PointState,
    density_from_bernoulli,
    pde_matrix,
    pi_inv,
    pi_map,
    pressure,
    sound_speed,
)
from .shock import (
    ShockPoint,
    UpstreamData,
    admissible,
    downstream_density,
    g_eval,
    g_grad_v,
    normal_jump,
    oblique_jump,
    shock_normal_from_velocities,
)
from .polar import (
    Polar,
    ShockType,
    classify_type,
    convexity_report,
    max_deflection,
    polar_to_csv,
    polar_trace,
    solve_deflection,
)
from .reflection import (
    ReflectionConfig,
    ReflectionSolution,
    classify_by_angles,
    local_config,
    reflection_angles,
    rotate_frame,
    shift_observer,
    solve_reflection,
    state_behind_incident,
    sweep_transitions,
)
from .certificate import (
    Certificate,
    CornerFrame,
    Subsolution,
    build_corner_frame,
    certify_nonexistence,
    check_certificate,
    choose_beta,
    subsolution_eval,
)
from .diagnostic import (
    GridField,
    check_shock_nodes,
    check_wall_signs,
    find_extrema,
    minimum_report,
    read_field,
    write_field,
)
from ._kernels import BACKEND

__version__ = "0.1.0"
