"""Archimedean spiral arc length and its inverse.

The curve is r(theta) = a + b*theta. Arc length has the closed form
L = |b| * (F(u1) - F(u0)) with F(u) = (u*sqrt(u^2+1) + asinh(u)) / 2 under the
substitution u = theta + a/b, which increases with theta for either sign of b.
An adaptive-quadrature evaluation of the same integral is kept alongside as an
independent route; the two must agree to 1e-9 relative.
"""
from __future__ import annotations

import math

from scipy.integrate import quad

from ..errors import AngleCapExceeded, AngleFloorUnmet, NegativeRadius


def _check_radius(a: float, b: float, theta0: float, theta1: float) -> None:
    if theta0 > theta1:
        raise ValueError(f"need theta0 <= theta1, got {theta0} > {theta1}")
    # r is linear in theta, so the minimum sits at an endpoint
    r_lo = min(a + b * theta0, a + b * theta1)
    if r_lo < 0:
        raise NegativeRadius(f"r(theta) = {a} + {b}*theta dips to {r_lo}")


def _antiderivative(u: float) -> float:
    return 0.5 * (u * math.sqrt(u * u + 1.0) + math.asinh(u))


def arc_length(a: float, b: float, theta0: float, theta1: float) -> float:
    """Closed-form arc length of r = a + b*theta over [theta0, theta1]."""
    _check_radius(a, b, theta0, theta1)
    if theta0 == theta1:
        return 0.0
    if b == 0.0:
        return a * (theta1 - theta0)
    u0 = theta0 + a / b
    u1 = theta1 + a / b
    return abs(b) * (_antiderivative(u1) - _antiderivative(u0))


def arc_length_quad(a: float, b: float, theta0: float, theta1: float) -> float:
    """Same integral by adaptive quadrature; the independent second route."""
    _check_radius(a, b, theta0, theta1)
    if theta0 == theta1:
        return 0.0

    def integrand(theta: float) -> float:
        r = a + b * theta
        return math.hypot(r, b)

    value, _err = quad(integrand, theta0, theta1, epsabs=0.0, epsrel=1e-12, limit=200)
    return value


def segment_arc(d: float, delta_r: float, phi: float) -> float:
    """Arc length of a segment that rises by delta_r while sweeping phi."""
    if phi <= 0.0:
        return 0.0
    return arc_length(d, delta_r / phi, 0.0, phi)


def solve_angle_for_arc(d: float, delta_r: float, target: float,
                        phi_min: float = math.pi / 3,
                        phi_max: float = 2.0 * math.pi,
                        tolerance: float = 1e-6) -> float:
    """Central angle phi at which the segment's arc length hits the target.

    The pitch is coupled to the angle as b = delta_r/phi, so the segment
    always rises by exactly delta_r; the map phi -> arc length is strictly
    increasing, which makes bisection exact.
    """
    if d <= 0.0:
        raise ValueError(f"start radius must be positive, got {d}")
    if delta_r < 0.0:
        raise ValueError(f"radial rise must be nonnegative, got {delta_r}")
    if target <= 0.0:
        raise ValueError(f"target arc must be positive, got {target}")

    if delta_r == 0.0:
        phi = target / d
        if phi > phi_max:
            raise AngleCapExceeded(
                f"target {target} needs angle {phi:.6g} > cap {phi_max:.6g}")
        if phi < phi_min:
            raise AngleFloorUnmet(
                f"target {target} needs angle {phi:.6g} < floor {phi_min:.6g}")
        return phi

    at_cap = segment_arc(d, delta_r, phi_max)
    if target > at_cap:
        raise AngleCapExceeded(
            f"target {target} exceeds max attainable arc {at_cap:.6g} at {phi_max:.6g}")
    at_floor = segment_arc(d, delta_r, phi_min)
    if target < at_floor:
        raise AngleFloorUnmet(
            f"target {target} is below arc {at_floor:.6g} at floor {phi_min:.6g}")

    lo, hi = phi_min, phi_max
    phi = 0.5 * (lo + hi)
    for _ in range(200):
        phi = 0.5 * (lo + hi)
        value = segment_arc(d, delta_r, phi)
        if abs(value - target) <= 0.5 * tolerance * target:
            return phi
        if value < target:
            lo = phi
        else:
            hi = phi
    return phi
