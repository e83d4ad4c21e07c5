"""Monotonicity machinery inside the unit ball.

The companion ball of B_r(x0) under spherical inversion has radius
r/|x0| and center x0/|x0|^2, and the hat member of the radial pair picks
up inversion weights: position-coupling corrections with |x0|^2 factors
and, in the capillary case, wetted-measure corrections on the sphere.
The origin is its own analytic branch, where the hat member collapses to
a constant multiple of the boundary measure.

All ball restrictions are radius-averaged over one shared window per
evaluation (see radial.RadialPrefix.windowed); the identities hold at
every radius, so they survive the averaging while the sample staircase
does not.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional
import warnings

import numpy as np

from .errors import AmbientError, GeometryError
from .fields import TestVectorField
from .geometry import BALL, sphere_inversion
from .radial import RadialPrefix
from .surfaces import SampledSurface
from .wetted import BallRestrictedEta, WettedRegion, eta_integral

ORIGIN = "origin"
GENERAL = "general"

_OFFSET = 1e-6


@dataclass
class BallProfile:
    """Radial-grid evaluation of the capillary radial pair in the ball.

    ``big_g`` is the monotone combination for theta in [pi/2, pi);
    ``remainder`` collects the position-coupling terms that vanish as the
    radius shrinks; ``residual`` holds normalized identity residuals over
    consecutive grid pairs.  ``branch`` is "origin" exactly when the base
    point sits at the origin.
    """

    base_point: np.ndarray
    r_grid: np.ndarray
    g_theta: np.ndarray
    g_hat_theta: np.ndarray
    big_g: np.ndarray
    remainder: np.ndarray
    residual: np.ndarray
    branch: str

    def min_forward_difference(self) -> float:
        return float(np.min(np.diff(self.big_g)))

    def worst_residual(self) -> float:
        return float(np.max(np.abs(self.residual)))


def _nudge_off_samples(surface: SampledSurface, x0: np.ndarray) -> np.ndarray:
    """Shift a base point off an exactly coincident sample (1e-6 tangent step)."""
    d = np.linalg.norm(surface.points - x0, axis=1)
    db = np.linalg.norm(surface.boundary_points - x0, axis=1)
    if min(d.min(initial=np.inf), db.min(initial=np.inf)) > 1e-9:
        return x0
    k = int(np.argmin(db))
    return x0 + _OFFSET * surface.boundary_tangents[k]


class _BallTerms:
    """Prefix sums of every integrand of the ball identity at one base point."""

    def __init__(self, surface: SampledSurface, region: Optional[WettedRegion], x0):
        if surface.ambient.kind != BALL:
            raise AmbientError("ball monotonicity needs a surface in the unit ball")
        self.surface = surface
        self.theta = surface.theta
        self.x0 = np.asarray(x0, dtype=float)
        self.dist0 = float(np.linalg.norm(self.x0))
        if self.dist0 < 1e-12:
            raise GeometryError("use the origin-branch helpers for x0 = 0")
        if self.dist0 < 1e-6:
            warnings.warn(
                f"base point |x0| = {self.dist0:.2e} is badly conditioned for the "
                "general branch; the origin branch starts at 1e-12",
                stacklevel=3,
            )
        self.xi = sphere_inversion(self.x0)
        w = surface.weights
        pts = surface.points
        nu = surface.normals
        h = surface.mean_curvature
        h2w = np.sum(h * h, axis=1) * w
        hxw = np.sum(h * pts, axis=1) * w
        hw = h * w[:, None]

        def square_term(center):
            rel = pts - center
            r2 = np.sum(rel * rel, axis=1)
            perp = np.sum(rel * nu, axis=1)
            return np.sum((0.25 * h + (perp / r2)[:, None] * nu) ** 2, axis=1) * w

        self.mu = RadialPrefix(
            pts, self.x0, {"mass": w, "h2": h2w, "hx": hxw, "h": hw, "sq": square_term(self.x0)}
        )
        x2 = np.sum(pts * pts, axis=1)
        xdnu = np.sum(pts * nu, axis=1)
        self.mu_hat = RadialPrefix(
            pts,
            self.xi,
            {
                "mass": w,
                "h2": h2w,
                "hx": hxw,
                "h": hw,
                "sq": square_term(self.xi),
                "x2": x2 * w,
                "x": pts * w[:, None],
                "xnu2": xdnu**2 * w,
                "nu_xnu": nu * (xdnu * w)[:, None],
                "x2hx": x2 * hxw,
                "xhx": pts * hxw[:, None],
            },
        )
        self.eta = None
        self.eta_hat = None
        if region is not None:
            nodes, _ = region.eta_nodes()

            def proj_term(center):
                rel = nodes - center
                r2 = np.maximum(np.sum(rel * rel, axis=1), 1e-300)
                return (np.sum(rel * nodes, axis=1) / r2) ** 2

            self.eta = BallRestrictedEta(region, self.x0, {"proj": proj_term(self.x0)})
            d2 = np.sum((nodes - self.xi) ** 2, axis=1)
            self.eta_hat = BallRestrictedEta(
                region, self.xi, {"proj": proj_term(self.xi), "dist2": d2}
            )

    # -- shared radius window --------------------------------------------------

    def halfwidth(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        w = np.maximum(
            self.mu.auto_halfwidth(r),
            self.dist0 * self.mu_hat.auto_halfwidth(r / self.dist0),
        )
        return np.minimum(w, 0.9 * r)

    def _q(self, key, r, w):
        return self.mu.windowed(key, r, w)

    def _q2(self, key, r, w):
        return self.mu.windowed_over_r2(key, r, w)

    def _qh(self, key, r, w):
        return self.mu_hat.windowed(key, r / self.dist0, w / self.dist0)

    def _q2h(self, key, r, w):
        # avg_s M(s/d0)/s^2 = avg_u M(u)/u^2 / d0^2 : returned WITHOUT the
        # 1/d0^2, i.e. this is avg of M(u)/u^2 in the hat radius u = s/d0
        return self.mu_hat.windowed_over_r2(key, r / self.dist0, w / self.dist0)

    # -- members of the pair -----------------------------------------------------
    #
    # every 1/r^2-weighted restriction is averaged as the whole term
    # M(s)/s^2; with s = d0 u the hat terms d0^2 M(u)/ (pi s^2) become
    # M(u)/(pi u^2), so the d0^2 prefactors cancel against _q2h

    def free_pair(self, r):
        """(g, g_hat) without wetted-measure corrections (vectorized in r)."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        w = self.halfwidth(r)
        g = (
            self._q2("mass", r, w) / np.pi
            + self._q("h2", r, w) / (16 * np.pi)
            + (self._q2("hx", r, w) - self._q2("h", r, w) @ self.x0) / (2 * np.pi)
        )
        m_hat = self._qh("mass", r, w)
        g_at_xi = (
            self._q2h("mass", r, w) / np.pi
            + self._qh("h2", r, w) / (16 * np.pi)
            + (self._q2h("hx", r, w) - self._q2h("h", r, w) @ self.xi) / (2 * np.pi)
        )
        xi2 = np.dot(self.xi, self.xi)
        dist2 = (
            self._q2h("x2", r, w) - 2.0 * self._q2h("x", r, w) @ self.xi + xi2 * self._q2h("mass", r, w)
        )
        tangential = (
            self._q2h("x2", r, w)
            - self._q2h("x", r, w) @ self.xi
            - self._q2h("xnu2", r, w)
            + self._q2h("nu_xnu", r, w) @ self.xi
        )
        h_dist2_x = (
            self._q2h("x2hx", r, w)
            - 2.0 * self._q2h("xhx", r, w) @ self.xi
            + xi2 * self._q2h("hx", r, w)
        )
        g_hat = (
            g_at_xi
            - (dist2 + tangential) / np.pi
            - h_dist2_x / (2 * np.pi)
            + self._qh("hx", r, w) / (2 * np.pi)
            + m_hat / np.pi
        )
        return g, g_hat

    def capillary_pair(self, r):
        """(g_theta, g_hat_theta): the pair with wetted-measure corrections."""
        if self.eta is None:
            raise GeometryError("capillary pair needs a wetted region")
        r = np.atleast_1d(np.asarray(r, dtype=float))
        w = self.halfwidth(r)
        g, g_hat = self.free_pair(r)
        ct = np.cos(self.theta)
        r_hat, w_hat = r / self.dist0, w / self.dist0
        g_theta = g - ct * self.eta.windowed_over_r2("mass", r, w) / np.pi
        g_hat_theta = (
            g_hat
            - ct * self.eta_hat.windowed_over_r2("mass", r_hat, w_hat) / np.pi
            + ct * self.eta_hat.windowed_over_r2("dist2", r_hat, w_hat) / np.pi
            - ct * self.eta_hat.windowed("mass", r_hat, w_hat) / np.pi
        )
        return g_theta, g_hat_theta

    def remainder(self, r):
        """The position-coupling remainder of the capillary pair."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        w = self.halfwidth(r)
        r_hat, w_hat = r / self.dist0, w / self.dist0
        xi2 = np.dot(self.xi, self.xi)
        dist2 = (
            self._q2h("x2", r, w) - 2.0 * self._q2h("x", r, w) @ self.xi + xi2 * self._q2h("mass", r, w)
        )
        tangential = (
            self._q2h("x2", r, w)
            - self._q2h("x", r, w) @ self.xi
            - self._q2h("xnu2", r, w)
            + self._q2h("nu_xnu", r, w) @ self.xi
        )
        h_dist2_x = (
            self._q2h("x2hx", r, w)
            - 2.0 * self._q2h("xhx", r, w) @ self.xi
            + xi2 * self._q2h("hx", r, w)
        )
        rem = (
            (self._q2("hx", r, w) - self._q2("h", r, w) @ self.x0) / (2 * np.pi)
            + (self._q2h("hx", r, w) - self._q2h("h", r, w) @ self.xi) / (2 * np.pi)
            - (dist2 + tangential) / np.pi
            - h_dist2_x / (2 * np.pi)
        )
        ct = np.cos(self.theta)
        return (
            rem
            + ct * self.eta_hat.windowed_over_r2("dist2", r_hat, w_hat) / np.pi
            - ct * self.eta_hat.windowed("mass", r_hat, w_hat) / np.pi
            + self._qh("hx", r, w) / (2 * np.pi)
            + self._qh("mass", r, w) / np.pi
        )

    def squares(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        w = self.halfwidth(r)
        return self._q("sq", r, w) / np.pi, self._qh("sq", r, w) / np.pi

    def deficits(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        w = self.halfwidth(r)
        ct = np.cos(self.theta)
        return (
            -ct / np.pi * self.eta.windowed("proj", r, w),
            -ct / np.pi * self.eta_hat.windowed("proj", r / self.dist0, w / self.dist0),
        )

    def identity_terms(self, sigma: float, rho: float) -> dict:
        r = np.array([sigma, rho])
        g_theta, g_hat_theta = self.capillary_pair(r)
        sq, sq_hat = self.squares(r)
        dfc, dfc_hat = self.deficits(r)
        return {
            "delta_g": float(np.diff(g_theta)[0]),
            "delta_g_hat": float(np.diff(g_hat_theta)[0]),
            "square": float(np.diff(sq)[0]),
            "square_hat": float(np.diff(sq_hat)[0]),
            "deficit": float(np.diff(dfc)[0]),
            "deficit_hat": float(np.diff(dfc_hat)[0]),
        }


# -- public operations -------------------------------------------------------


def free_boundary_radial_pair(surface: SampledSurface, x0, r: float):
    """The inversion-weighted radial pair without wetted corrections."""
    x0 = _nudge_off_samples(surface, np.asarray(x0, dtype=float))
    t = _BallTerms(surface, None, x0)
    g, g_hat = t.free_pair(float(r))
    return float(g[0]), float(g_hat[0])


def capillary_radial_pair(surface: SampledSurface, region: WettedRegion, x0, r: float):
    """The radial pair with the wetted-measure corrections."""
    x0 = _nudge_off_samples(surface, np.asarray(x0, dtype=float))
    t = _BallTerms(surface, region, x0)
    g, g_hat = t.capillary_pair(float(r))
    return float(g[0]), float(g_hat[0])


class _OriginTerms:
    """Origin-branch integrals: plain prefix sums about zero."""

    def __init__(self, surface: SampledSurface):
        w = surface.weights
        pts = surface.points
        nu = surface.normals
        h = surface.mean_curvature
        r2 = np.sum(pts * pts, axis=1)
        perp = np.sum(pts * nu, axis=1)
        sq = np.sum((0.25 * h + (perp / r2)[:, None] * nu) ** 2, axis=1) * w
        self.surface = surface
        self.prefix = RadialPrefix(
            pts,
            np.zeros(3),
            {"mass": w, "h2": np.sum(h * h, axis=1) * w, "hx": np.sum(h * pts, axis=1) * w, "sq": sq},
        )

    def window(self, r):
        """Ring-commensurate averaging window shared by every origin term.

        The origin sits on the symmetry axis of every generator, so the
        sample distances cluster in rings; snapping the window edges to ring
        gaps integrates the staircase exactly.  Edges are forced monotone
        over the (sorted) radius grid so sliding averages of a monotone
        profile stay monotone.
        """
        r = np.atleast_1d(np.asarray(r, dtype=float))
        w = np.minimum(self.prefix.auto_halfwidth(r), 0.9 * r)
        lo, hi = self.prefix.snapped_window(r, w)
        lo = np.maximum.accumulate(lo)
        hi = np.maximum.accumulate(hi)
        hi = np.maximum(hi, lo + 1e-12)
        return lo, hi

    def g(self, r):
        lo, hi = self.window(r)
        return (
            self.prefix.bounds_average("mass", lo, hi, over_r2=True) / np.pi
            + self.prefix.bounds_average("h2", lo, hi) / (16 * np.pi)
            + self.prefix.bounds_average("hx", lo, hi, over_r2=True) / (2 * np.pi)
        )

    def g_hat(self, r):
        """Boundary-measure hat member, averaged in closed form on the window.

        The uniform average of min(s^-2, 1) over [a, b] is
        [(min(b,1) - min(a,1)) + 1/max(a,1) - 1/max(b,1)] / (b - a).
        """
        a, b = self.window(r)
        gamma = self.surface.boundary_length()
        coeff = -np.sin(self.surface.theta) * gamma / (2 * np.pi)
        integral = (np.minimum(b, 1.0) - np.minimum(a, 1.0)) + 1.0 / np.maximum(a, 1.0) - 1.0 / np.maximum(b, 1.0)
        avg = integral / np.maximum(b - a, 1e-300)
        return coeff * avg

    def squares(self, r):
        lo, hi = self.window(r)
        return self.prefix.bounds_average("sq", lo, hi) / np.pi

    def remainder(self, r):
        lo, hi = self.window(r)
        return self.prefix.bounds_average("hx", lo, hi, over_r2=True) / (2 * np.pi)


def monotonicity_identity_residual(
    surface: SampledSurface, region: WettedRegion, x0, sigma: float, rho: float
) -> float:
    """Signed residual (left minus right) of the ball two-radius identity."""
    return monotonicity_identity_detail(surface, region, x0, sigma, rho)["residual"]


def monotonicity_identity_detail(
    surface: SampledSurface, region: WettedRegion, x0, sigma: float, rho: float
) -> dict:
    """Identity terms, raw and normalized residuals, and the branch taken.

    The general branch equates two annulus square integrals minus two
    wetted projection integrals with the increment of the capillary pair;
    the origin branch has a single square integral against g_0 plus the
    constant boundary-measure hat term.
    """
    if not 0.0 < sigma <= rho:
        raise ValueError("need 0 < sigma <= rho")
    x0 = np.asarray(x0, dtype=float)
    if sigma == rho:
        return {"residual": 0.0, "normalized": 0.0, "scale": 1.0, "branch": GENERAL}
    if np.linalg.norm(x0) < 1e-12:
        t = _OriginTerms(surface)
        r = np.array([sigma, rho])
        lhs = float(np.diff(t.squares(r))[0])
        rhs = float(np.diff(t.g(r) + t.g_hat(r))[0])
        scale = max(abs(lhs), abs(rhs), 1e-12)
        return {
            "square": lhs,
            "delta_g": rhs,
            "residual": lhs - rhs,
            "normalized": (lhs - rhs) / scale,
            "scale": scale,
            "branch": ORIGIN,
        }
    x0 = _nudge_off_samples(surface, x0)
    t = _BallTerms(surface, region, x0)
    terms = t.identity_terms(sigma, rho)
    lhs = terms["square"] + terms["square_hat"] + terms["deficit"] + terms["deficit_hat"]
    rhs = terms["delta_g"] + terms["delta_g_hat"]
    scale = max(max(abs(v) for v in terms.values()), 1e-12)
    res = lhs - rhs
    return {**terms, "residual": res, "normalized": res / scale, "scale": scale, "branch": GENERAL}


def monotonicity_profile(
    surface: SampledSurface, region: WettedRegion, x0, r_grid
) -> BallProfile:
    """Profile of the capillary pair over a radius grid, both branches."""
    x0 = np.asarray(x0, dtype=float)
    r_grid = np.sort(np.asarray(r_grid, dtype=float))
    if np.linalg.norm(x0) < 1e-12:
        t = _OriginTerms(surface)
        g = t.g(r_grid)
        g_hat = t.g_hat(r_grid)
        big_g = g + g_hat
        sq = t.squares(r_grid)
        residual = np.zeros(len(r_grid))
        steps = np.diff(big_g) - np.diff(sq)
        floor = 1e-2 * max(float(np.max(np.abs(big_g))), float(np.max(np.abs(sq))), 1e-10)
        scales = np.maximum.reduce(
            [np.abs(np.diff(big_g)), np.abs(np.diff(sq)), np.full(len(r_grid) - 1, floor)]
        )
        residual[1:] = steps / scales
        return BallProfile(x0, r_grid, g, g_hat, big_g, t.remainder(r_grid), residual, ORIGIN)

    x0 = _nudge_off_samples(surface, x0)
    t = _BallTerms(surface, region, x0)
    g_theta, g_hat_theta = t.capillary_pair(r_grid)
    big_g = g_theta + g_hat_theta
    remainder = t.remainder(r_grid)
    sq_direct, sq_hat = t.squares(r_grid)
    sq = sq_direct + sq_hat
    dfc_direct, dfc_hat = t.deficits(r_grid)
    dfc = dfc_direct + dfc_hat
    residual = np.zeros(len(r_grid))
    steps = np.diff(big_g) - np.diff(sq) - np.diff(dfc)
    # normalize by the step terms, floored at a fraction of the profile
    # scale so that empty annuli report ~0 instead of 0/0 noise
    floor = 1e-2 * max(float(np.max(np.abs(big_g))), float(np.max(np.abs(sq))), 1e-10)
    scales = np.maximum.reduce(
        [np.abs(np.diff(big_g)), np.abs(np.diff(sq)), np.abs(np.diff(dfc)), np.full(len(r_grid) - 1, floor)]
    )
    residual[1:] = steps / scales
    return BallProfile(x0, r_grid, g_theta, g_hat_theta, big_g, remainder, residual, GENERAL)


def first_variation_residual(
    surface: SampledSurface, region: WettedRegion, field: TestVectorField
) -> float:
    """Residual of the bounded first variation in the ball for any field.

    int div_Sigma X dmu - cos(theta) int div_sphere X deta + int H.X dmu
    + 2 cos(theta) int X.x deta - sin(theta) int X.x dgamma, with gamma the
    arclength measure on the boundary.
    """
    if surface.ambient.kind != BALL:
        raise AmbientError("this first variation lives in the unit ball")
    pts = surface.points
    jac = field.jacobian(pts)
    nu = surface.normals
    div_sigma = np.trace(jac, axis1=1, axis2=2) - np.einsum("ni,nij,nj->n", nu, jac, nu)
    term1 = float(np.sum(div_sigma * surface.weights))
    nodes, eta_w = region.eta_nodes()
    jac_s = field.jacobian(nodes)
    div_sphere = np.trace(jac_s, axis1=1, axis2=2) - np.einsum(
        "ni,nij,nj->n", nodes, jac_s, nodes
    )
    term2 = float(np.sum(div_sphere * eta_w))
    term3 = float(np.sum(np.sum(surface.mean_curvature * field(pts), axis=1) * surface.weights))
    term4 = float(np.sum(np.sum(field(nodes) * nodes, axis=1) * eta_w))
    bp = surface.boundary_points
    term5 = float(np.sum(np.sum(field(bp) * bp, axis=1) * surface.boundary_weights))
    theta = surface.theta
    return term1 - np.cos(theta) * term2 + term3 + 2 * np.cos(theta) * term4 - np.sin(theta) * term5


def sphere_point_identity_residual(x, x0) -> float:
    """Residual of the half identity for two unit-sphere points.

    ((x-x0)/|x-x0|^2 . x)^2 + ((x-xi(x0))/|x-xi(x0)|^2 . x)^2 = 1/2 on the
    sphere; zero to rounding for distinct points.
    """
    x = np.asarray(x, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if abs(np.linalg.norm(x) - 1.0) > 1e-9 or abs(np.linalg.norm(x0) - 1.0) > 1e-9:
        raise GeometryError("both points must lie on the unit sphere")
    if np.linalg.norm(x - x0) < 1e-12:
        raise GeometryError("the identity is undefined at coincident points")
    # extended precision, with the inputs re-projected onto the exact unit
    # sphere: the residual is sensitive to radial input error at eps/|x-x0|^2
    xl = x.astype(np.longdouble)
    xl = xl / np.sqrt(np.dot(xl, xl))
    x0l = x0.astype(np.longdouble)
    x0l = x0l / np.sqrt(np.dot(x0l, x0l))
    xil = x0l / np.dot(x0l, x0l)
    t1 = (np.dot(xl - x0l, xl) / np.dot(xl - x0l, xl - x0l)) ** 2
    t2 = (np.dot(xl - xil, xl) / np.dot(xl - xil, xl - xil)) ** 2
    return float(t1 + t2 - np.longdouble(0.5))


def minimal_density_identity_residual(surface: SampledSurface, region: WettedRegion, x0) -> float:
    """Residual of the minimal-surface density identity at a sphere point.

    (1/pi) int [|(x-x0)perp|^2/|x-x0|^4 + (inverted twin)] dmu
    = (2|Sigma| - cos(theta)|T|)/(2 pi) - (1 - cos(theta)) N(x0), with the
    multiplicity N read off the boundary density.
    """
    from .energy import density

    max_h = surface.max_mean_curvature()
    if max_h > 1e-6:
        raise GeometryError(f"identity needs a minimal surface (max |H| = {max_h:.2g})")
    x0 = np.asarray(x0, dtype=float)
    if abs(np.linalg.norm(x0) - 1.0) > 1e-6:
        raise GeometryError("the base point must lie on the unit sphere")
    x0 = _nudge_off_samples(surface, x0)
    xi = sphere_inversion(x0)
    pts, w, nu = surface.points, surface.weights, surface.normals
    lhs = 0.0
    for c in (x0, xi):
        rel = pts - c
        r2 = np.sum(rel * rel, axis=1)
        perp = np.sum(rel * nu, axis=1)
        lhs += float(np.sum(perp**2 / r2**2 * w)) / np.pi
    n_x0 = 2.0 * density(surface, x0)
    theta = surface.theta
    rhs = (2.0 * surface.area() - np.cos(theta) * eta_integral(region)) / (2 * np.pi) - (
        1.0 - np.cos(theta)
    ) * n_x0
    return lhs - rhs


def limit_identity_residuals(surface: SampledSurface, region: WettedRegion, x0) -> dict:
    """Residuals of the full-space limit identities at one base point.

    The branch is chosen by the base point: origin, a point of the unit
    sphere, or a general point; the key of the returned dict names it.
    """
    from .energy import tilde_density

    x0 = np.asarray(x0, dtype=float)
    theta = surface.theta
    gamma = surface.boundary_length()
    w_tot = 0.25 * float(
        np.sum(np.sum(surface.mean_curvature**2, axis=1) * surface.weights)
    )
    pts, w, nu, h = surface.points, surface.weights, surface.normals, surface.mean_curvature

    def mu_square(center):
        rel = pts - center
        r2 = np.sum(rel * rel, axis=1)
        perp = np.sum(rel * nu, axis=1)
        return float(np.sum(np.sum((0.25 * h + (perp / r2)[:, None] * nu) ** 2, axis=1) * w))

    if np.linalg.norm(x0) < 1e-12:
        lhs = mu_square(np.zeros(3)) / np.pi
        rhs = (
            w_tot / (4 * np.pi)
            + np.sin(theta) * gamma / (2 * np.pi)
            - tilde_density(surface, region, x0)
        )
        return {"origin": lhs - rhs}

    x0 = _nudge_off_samples(surface, x0)
    xi = sphere_inversion(x0)
    nodes, eta_w = region.eta_nodes()
    eta_total = float(np.sum(eta_w))

    def eta_proj(center):
        rel = nodes - center
        r2 = np.maximum(np.sum(rel * rel, axis=1), 1e-300)
        return float(np.sum((np.sum(rel * nodes, axis=1) / r2) ** 2 * eta_w))

    lhs_mu = (mu_square(x0) + mu_square(xi)) / np.pi
    tilde = tilde_density(surface, region, x0)
    if abs(np.linalg.norm(x0) - 1.0) <= 1e-6:
        # on the sphere the two projection factors sum to 1/2 pointwise
        rhs = (
            w_tot / (2 * np.pi)
            + (np.sin(theta) * gamma - np.cos(theta) * eta_total) / (2 * np.pi)
            - tilde
        )
        return {"sphere_point": lhs_mu - rhs}
    lhs = lhs_mu - np.cos(theta) / np.pi * (eta_proj(x0) + eta_proj(xi))
    rhs = (
        w_tot / (2 * np.pi)
        + (np.sin(theta) * gamma - 2.0 * np.cos(theta) * eta_total) / (2 * np.pi)
        - tilde
    )
    return {"general": lhs - rhs}
