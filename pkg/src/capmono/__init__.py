"""Numerical verification of energies, densities and monotonicity
identities for capillary surfaces over the plane and in the unit ball."""

from .geometry import (
    Ambient,
    Ball3,
    hat_ball,
    mean_curvature_expansion_residual,
    normal_split,
    reflect_halfspace,
    sphere_inversion,
)
from .surfaces import (
    BoundarySample,
    ParametricChart,
    SampledSurface,
    SurfaceSample,
    contact_angle_residual,
    geodesic_disk_ball,
    perturb_chart,
    sample_chart,
    spherical_cap_ball,
    spherical_cap_halfspace,
)
from .wetted import (
    OrientedCurve,
    WettedRegion,
    eta_integral,
    oriented_area,
    rotation_index,
    spherical_winding_number,
    total_boundary_measure,
    wetted_region,
    winding_number,
)
from .energy import (
    EnergyReport,
    area_estimate_margin,
    capillary_density,
    density,
    disk_area_margin,
    divergence_identity_residual,
    energy_report,
    gauss_bonnet_residual,
    gauss_equation_residual,
    li_yau_margin,
    tilde_density,
    willmore_ball,
    willmore_classical,
    willmore_energy,
)
from .fields import (
    TestVectorField,
    constant_field,
    position_field,
    radial_cutoff_field,
    rotation_field,
    zero_field,
)
from . import ball, halfspace
from .tables import RunConfig, load_config, parse_config, serialize_config

__all__ = [
    "Ambient",
    "Ball3",
    "BoundarySample",
    "EnergyReport",
    "OrientedCurve",
    "ParametricChart",
    "RunConfig",
    "SampledSurface",
    "SurfaceSample",
    "TestVectorField",
    "WettedRegion",
    "area_estimate_margin",
    "ball",
    "capillary_density",
    "constant_field",
    "contact_angle_residual",
    "density",
    "disk_area_margin",
    "divergence_identity_residual",
    "energy_report",
    "eta_integral",
    "gauss_bonnet_residual",
    "gauss_equation_residual",
    "geodesic_disk_ball",
    "halfspace",
    "hat_ball",
    "li_yau_margin",
    "load_config",
    "mean_curvature_expansion_residual",
    "normal_split",
    "oriented_area",
    "parse_config",
    "perturb_chart",
    "position_field",
    "radial_cutoff_field",
    "reflect_halfspace",
    "rotation_field",
    "rotation_index",
    "sample_chart",
    "serialize_config",
    "sphere_inversion",
    "spherical_cap_ball",
    "spherical_cap_halfspace",
    "spherical_winding_number",
    "tilde_density",
    "total_boundary_measure",
    "wetted_region",
    "willmore_ball",
    "willmore_classical",
    "willmore_energy",
    "winding_number",
    "zero_field",
]
