"""Generators, chart sampling, frames and perturbations."""

import numpy as np
import pytest

from capmono.errors import GeometryError, ImmersionError
from capmono.geometry import Ambient
from capmono.surfaces import (
    ParametricChart,
    contact_angle_residual,
    geodesic_disk_ball,
    perturb_chart,
    sample_chart,
    spherical_cap_ball,
    spherical_cap_halfspace,
    strip_callbacks,
    with_fd_step,
)

THETAS = (np.pi / 6, np.pi / 2, 2 * np.pi / 3, 5 * np.pi / 6)


def cap_area(theta, radius=1.0):
    return 2 * np.pi * radius**2 * (1 - np.cos(theta))


@pytest.mark.parametrize("theta", THETAS)
def test_cap_measures(stock, theta):
    surface, _ = stock.cap(theta)
    assert surface.area() == pytest.approx(cap_area(theta), rel=1e-6)
    assert surface.boundary_length() == pytest.approx(2 * np.pi * np.sin(theta), rel=1e-6)
    assert surface.metadata["contact_residual"] < 1e-10


def test_hemisphere_area_and_length():
    surface = sample_chart(spherical_cap_halfspace(np.pi / 2), 64, 64)
    assert surface.area() == pytest.approx(2 * np.pi, rel=1e-4)
    assert surface.boundary_length() == pytest.approx(2 * np.pi, rel=1e-4)


def test_cap_off_center_translation():
    surface = sample_chart(spherical_cap_halfspace(2 * np.pi / 3, 1.0, (0.7, -0.4)), 64, 64)
    assert surface.area() == pytest.approx(cap_area(2 * np.pi / 3), rel=1e-6)
    center = np.sum(
        surface.boundary_points[:, :2] * surface.boundary_weights[:, None], axis=0
    ) / surface.boundary_length()
    assert np.allclose(center, [0.7, -0.4], atol=1e-8)


def test_cap_scaling_invariance(stock):
    base, _ = stock.cap(2 * np.pi / 3)
    big = sample_chart(spherical_cap_halfspace(2 * np.pi / 3, 2.5), 96, 96)
    w_base = 0.25 * np.sum(np.sum(base.mean_curvature**2, axis=1) * base.weights)
    w_big = 0.25 * np.sum(np.sum(big.mean_curvature**2, axis=1) * big.weights)
    assert w_big == pytest.approx(w_base, rel=1e-6)


def test_flat_disk_measures():
    surface = sample_chart(geodesic_disk_ball(np.pi / 3), 64, 64)
    assert surface.area() == pytest.approx(0.75 * np.pi, rel=1e-6)
    assert surface.boundary_length() == pytest.approx(np.sqrt(3) * np.pi, rel=1e-6)
    assert np.max(np.abs(surface.mean_curvature)) < 1e-8
    assert surface.metadata["contact_residual"] < 1e-10


def test_free_boundary_disk():
    surface = sample_chart(geodesic_disk_ball(np.pi / 2), 64, 64)
    assert surface.area() == pytest.approx(np.pi, rel=1e-6)
    assert surface.boundary_length() == pytest.approx(2 * np.pi, rel=1e-6)


@pytest.mark.parametrize("theta,alpha", [(2 * np.pi / 3, np.pi / 3), (np.pi / 3, np.pi / 2), (np.pi / 2, np.pi / 4)])
def test_cap_ball_geometry(theta, alpha):
    surface = sample_chart(spherical_cap_ball(theta, alpha), 64, 128)
    s = np.sin(theta - alpha)
    rho = np.sin(alpha) / abs(s)
    assert surface.area() == pytest.approx(2 * np.pi * rho**2 * (1 - np.cos(theta - alpha)), rel=1e-6)
    assert surface.boundary_length() == pytest.approx(2 * np.pi * np.sin(alpha), rel=1e-6)
    assert surface.metadata["contact_residual"] < 1e-8
    assert np.max(np.linalg.norm(surface.points, axis=1)) <= 1.0 + 1e-8


def test_cap_ball_degenerates_to_disk():
    chart = spherical_cap_ball(np.pi / 2, np.pi / 2)
    assert chart.name == "flat-disk-ball"
    with pytest.raises(GeometryError):
        spherical_cap_ball(np.pi / 3, 1e-12)


def test_boundary_frame_orthonormal(stock):
    surface, _ = stock.cap(2 * np.pi / 3)
    tau, nu, mu = surface.boundary_tangents, None, surface.boundary_conormals
    assert np.max(np.abs(np.einsum("ij,ij->i", tau, mu))) < 1e-8
    assert np.max(np.abs(np.linalg.norm(tau, axis=1) - 1)) < 1e-8
    assert np.max(np.abs(np.linalg.norm(mu, axis=1) - 1)) < 1e-8


def test_curvature_perpendicular_to_tangent(stock):
    surface, _ = stock.cap(2 * np.pi / 3)
    cross = np.cross(surface.mean_curvature, surface.normals)
    assert np.max(np.linalg.norm(cross, axis=1)) < 1e-8


@pytest.mark.parametrize("theta", (np.pi / 6, np.pi / 3, 2 * np.pi / 3))
def test_boundary_curvature_relation_halfspace(theta):
    surface = sample_chart(spherical_cap_halfspace(theta), 64, 64)
    expected = np.cos(theta) * surface.boundary_kg_wetting
    assert np.max(np.abs(surface.boundary_kg - expected)) < 1e-6


@pytest.mark.parametrize(
    "builder",
    [
        lambda: geodesic_disk_ball(np.pi / 3),
        lambda: spherical_cap_ball(2 * np.pi / 3, np.pi / 3),
    ],
)
def test_boundary_curvature_relation_ball(builder):
    surface = sample_chart(builder(), 64, 128)
    theta = surface.theta
    expected = np.cos(theta) * surface.boundary_kg_wetting + np.sin(theta)
    assert np.max(np.abs(surface.boundary_kg - expected)) < 1e-6


def test_finite_difference_matches_analytic():
    chart = spherical_cap_halfspace(2 * np.pi / 3)
    analytic = sample_chart(chart, 32, 32)
    fd = sample_chart(strip_callbacks(chart), 32, 32)
    assert np.max(np.abs(fd.mean_curvature - analytic.mean_curvature)) < 1e-6
    assert np.max(np.abs(fd.normals - analytic.normals)) < 1e-9
    assert np.max(np.abs(fd.gauss_curvature - analytic.gauss_curvature)) < 1e-6


def test_fd_willmore_second_order_convergence():
    # tie the difference step to the grid so the finite-difference error is
    # the visible one; halving the step must cut the energy error ~4x
    theta = 2 * np.pi / 3
    exact = cap_area(theta)
    errs = []
    for nu in (16, 32, 64):
        chart = with_fd_step(strip_callbacks(spherical_cap_halfspace(theta)), 0.5 / nu)
        surface = sample_chart(chart, max(nu, 8), max(nu, 8))
        w = 0.25 * np.sum(np.sum(surface.mean_curvature**2, axis=1) * surface.weights)
        errs.append(abs(w - exact))
    assert errs[0] / errs[1] >= 3.0
    assert errs[1] / errs[2] >= 3.0


def test_perturbation_zero_amplitude_is_same_object():
    chart = spherical_cap_halfspace(np.pi / 2)
    assert perturb_chart(chart, 0.0, 3) is chart


def test_perturbation_boundary_stays_on_plane(stock):
    surface, _ = stock.perturbed_cap(2 * np.pi / 3, 0.05, 2)
    assert np.max(np.abs(surface.boundary_points[:, 2])) < 1e-8
    assert surface.metadata["contact_residual"] > 1e-3


def test_perturbation_boundary_stays_on_sphere():
    chart = perturb_chart(geodesic_disk_ball(np.pi / 3), 0.05, 2)
    surface = sample_chart(chart, 48, 96)
    assert np.max(np.abs(np.linalg.norm(surface.boundary_points, axis=1) - 1)) < 1e-8
    assert np.max(np.linalg.norm(surface.points, axis=1)) <= 1 + 1e-8


def test_perturbed_cap_energy_strictly_above(stock):
    surface, _ = stock.perturbed_cap(2 * np.pi / 3, 0.05, 2)
    w = 0.25 * np.sum(np.sum(surface.mean_curvature**2, axis=1) * surface.weights)
    assert w > cap_area(2 * np.pi / 3) + 1e-3


def test_degenerate_chart_raises():
    ambient = Ambient("halfspace", np.pi / 2)

    def pinched(u, v):
        u = np.asarray(u, dtype=float)
        # collapses the angular direction at every radius
        return np.stack([u, np.zeros_like(u), np.zeros_like(np.asarray(v))], axis=-1)

    chart = ParametricChart(ambient=ambient, domain="polar", f=pinched)
    with pytest.raises(ImmersionError):
        sample_chart(chart, 8, 8)


def test_small_resolution_rejected():
    with pytest.raises(ValueError):
        sample_chart(spherical_cap_halfspace(np.pi / 2), 4, 64)
    with pytest.raises(ValueError):
        sample_chart(spherical_cap_halfspace(np.pi / 2), 64, 64, rule="monte-carlo")


def test_rectangle_chart_gauss_bonnet():
    # graph patch over the unit square, boundary clamped to the plane; the
    # four corner angles enter the Gauss-Bonnet bookkeeping
    from capmono.energy import gauss_bonnet_residual

    ambient = Ambient("halfspace", np.pi / 2)

    def f(u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        bump = 0.4 * (u * (1 - u) * v * (1 - v)) ** 2 * 16
        return np.stack([u, v, bump], axis=-1)

    chart = ParametricChart(ambient=ambient, domain="rectangle", f=f)
    surface = sample_chart(chart, 48, 48)
    assert len(surface.corner_angles) == 4
    assert abs(gauss_bonnet_residual(surface)) < 1e-3


def test_contact_check_requires_boundary(stock):
    surface, _ = stock.cap(np.pi / 2)
    assert contact_angle_residual(surface) < 1e-10
