"""Uniform-pressure rectangular-cell elastic model (finite cells).

A uniform pressure p over the rectangle |x'| <= a, |y'| <= b on the
surface of an elastic half space displaces the point (x, y, z) by an
amount expressible through two potentials of the loaded area,

    chi = integral of p * log(z + r) over the cell
    V   = integral of p / r         over the cell

with r the distance from (x', y', 0) to (x, y, z):

    ux = -1/(4 pi) [ 2(1+nu)(1-2 nu)/E * d(chi)/dx + 2(1+nu) z/E * dV/dx ]
    uy = likewise with d/dy
    uz = +1/(4 pi) [ 4(1-nu^2)/E * V - 2(1+nu) z/E * dV/dz ]

Both potentials integrate in closed form.  With the per-term
abbreviations (j = 1 uses c = a - x, j = 2 uses c = -(a + x); dy is the
integration bracket offset y' - y)

    r    = sqrt(c^2 + dy^2 + z^2)
    beta = sqrt(c^2 + z^2)
    psi  = dy / (r + beta)

the antiderivatives used below are

    J = dy [ln(z + r) - 1] + z ln((1+psi)/(1-psi)) + 2|c| atan(|c| psi / (z + beta))
    L = dy [ln(c + r) - 1] + c ln((1+psi)/(1-psi)) + 2 z  atan(z   psi / (c + beta))

and the displacements are bracketed differences of J, L and two direct
log/arctan terms over y' = +-b (x' = +-a for uy).  Every term of the
form w * f with f divergent has a removable w -> 0 limit of zero; the
code forces that limit explicitly, so evaluations are finite for any
z >= 0 including cell edges and corners.

The effective influence of a cell on a sensing node is the surface
displacement minus the displacement at depth h_c, per unit pressure.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate

from .errors import InvalidArgumentError, OracleFailureError

# A weight smaller than this fraction of the local length scale forces
# its (removable-limit) term to zero.
EDGE_WEIGHT_TOL = 1e-14

# Depth floor for the log-potential quadrature oracle.
ORACLE_Z_FLOOR = 1e-9

_4PI = 4.0 * math.pi


def _add_sqrt(u: float, s: float) -> float:
    """u + sqrt(u^2 + s) without cancellation for u < 0 (s >= 0)."""
    r = math.sqrt(u * u + s)
    if u >= 0.0:
        return u + r
    return s / (r - u)


def _rbp(c: float, dy: float, z: float) -> tuple[float, float, float]:
    r = math.sqrt(c * c + dy * dy + z * z)
    beta = math.sqrt(c * c + z * z)
    den = r + beta
    psi = dy / den if den > 0.0 else 0.0
    return r, beta, psi


def _term_J(c: float, dy: float, z: float, scale: float) -> float:
    r, beta, psi = _rbp(c, dy, z)
    t = 0.0
    if abs(dy) > EDGE_WEIGHT_TOL * scale:
        t += dy * (math.log(_add_sqrt(z, c * c + dy * dy)) - 1.0)
    if z > EDGE_WEIGHT_TOL * scale:
        t += z * math.log((1.0 + psi) / (1.0 - psi))
    ac = abs(c)
    t += 2.0 * ac * math.atan2(ac * psi, z + beta)
    return t


def _term_L(c: float, dy: float, z: float, scale: float) -> float:
    r, beta, psi = _rbp(c, dy, z)
    t = 0.0
    if abs(dy) > EDGE_WEIGHT_TOL * scale:
        t += dy * (math.log(_add_sqrt(c, dy * dy + z * z)) - 1.0)
    if abs(c) > EDGE_WEIGHT_TOL * scale:
        t += c * math.log((1.0 + psi) / (1.0 - psi))
    t += 2.0 * z * math.atan2(z * psi, _add_sqrt(c, z * z))
    return t


def _tangential_parts(a: float, b: float, x: float, y: float, z: float, scale: float):
    """Bracketed (J2 - J1) and log terms entering the x displacement."""
    c1 = a - x
    c2 = -(a + x)
    val_j = 0.0
    val_log = 0.0
    use_log = z > EDGE_WEIGHT_TOL * scale
    for dy, sgn in ((b - y, 1.0), (-b - y, -1.0)):
        val_j += sgn * (_term_J(c2, dy, z, scale) - _term_J(c1, dy, z, scale))
        if use_log:
            num = _add_sqrt(dy, c2 * c2 + z * z)
            den = _add_sqrt(dy, c1 * c1 + z * z)
            val_log += sgn * math.log(num / den)
    return val_j, val_log


def _normal_parts(a: float, b: float, x: float, y: float, z: float, scale: float):
    """Bracketed (L1 - L2) and arctangent terms entering the z displacement."""
    c1 = a - x
    c2 = -(a + x)
    val_l = 0.0
    val_arc = 0.0
    for dy, sgn in ((b - y, 1.0), (-b - y, -1.0)):
        val_l += sgn * (_term_L(c1, dy, z, scale) - _term_L(c2, dy, z, scale))
        r1 = math.sqrt(c1 * c1 + dy * dy + z * z)
        r2 = math.sqrt(c2 * c2 + dy * dy + z * z)
        val_arc += sgn * (
            math.atan2((a - x) * dy, z * r1) + math.atan2((a + x) * dy, z * r2)
        )
    return val_l, val_arc


def _check_cell_point(cell, pt) -> tuple[float, float, float, float, float]:
    a, b = (float(v) for v in cell)
    x, y, z = (float(v) for v in pt)
    if not (a > 0.0 and b > 0.0):
        raise InvalidArgumentError("cell half-extents must be positive")
    if z < 0.0:
        raise InvalidArgumentError("depth z must be non-negative, got %r" % z)
    return a, b, x, y, z


def love_displacement(p: float, cell, pt, params) -> np.ndarray:
    """Displacement (ux, uy, uz) at ``pt`` from uniform pressure ``p``.

    Parameters
    ----------
    p : pressure over the cell, Pa.
    cell : half-extents (a, b) of the rectangle, m.
    pt : evaluation point (x, y, z) with z >= 0, m.
    params : ElastomerParams; only young_modulus and poisson_ratio enter.
    """
    a, b, x, y, z = _check_cell_point(cell, pt)
    E = params.young_modulus
    nu = params.poisson_ratio
    scale = a + b + abs(x) + abs(y) + z
    inv_g = 2.0 * (1.0 + nu) / E

    jx, logx = _tangential_parts(a, b, x, y, z, scale)
    jy, logy = _tangential_parts(b, a, y, x, z, scale)
    lv, arc = _normal_parts(a, b, x, y, z, scale)

    ux = -(p / _4PI) * ((1.0 - 2.0 * nu) * inv_g * jx + inv_g * z * logx)
    uy = -(p / _4PI) * ((1.0 - 2.0 * nu) * inv_g * jy + inv_g * z * logy)
    uz = (p / _4PI) * (2.0 * (1.0 - nu) * inv_g * lv + inv_g * z * arc)
    return np.array([ux, uy, uz])


def _surface_tangential_j(a: float, b: float, x: float, y: float, scale: float) -> float:
    """(J2 - J1) bracket specialized to z = 0; the z log term is absent."""
    c1 = a - x
    c2 = -(a + x)
    val = 0.0
    for dy, sgn in ((b - y, 1.0), (-b - y, -1.0)):
        for c, csgn in ((c2, 1.0), (c1, -1.0)):
            r = math.sqrt(c * c + dy * dy)
            ac = abs(c)
            t = 2.0 * ac * math.atan2(ac * dy, (r + ac) * ac) if ac > 0.0 else 0.0
            if abs(dy) > EDGE_WEIGHT_TOL * scale:
                t += dy * (math.log(r) - 1.0)
            val += sgn * csgn * t
    return val


def _surface_normal_l(a: float, b: float, x: float, y: float, scale: float) -> float:
    """(L1 - L2) bracket specialized to z = 0; the arctangent term is absent."""
    c1 = a - x
    c2 = -(a + x)
    val = 0.0
    for dy, sgn in ((b - y, 1.0), (-b - y, -1.0)):
        for c, csgn in ((c1, 1.0), (c2, -1.0)):
            r = math.sqrt(c * c + dy * dy)
            ac = abs(c)
            t = 0.0
            if abs(dy) > EDGE_WEIGHT_TOL * scale:
                t += dy * (math.log(_add_sqrt(c, dy * dy)) - 1.0)
            if ac > EDGE_WEIGHT_TOL * scale:
                den = r + ac
                t += c * math.log((den + dy) / (den - dy))
            val += sgn * csgn * t
    return val


def love_effective_column(delta, half_extents, h_c: float, params) -> np.ndarray:
    """Effective displacement per unit pressure on one cell.

    ``delta`` is the in-plane offset of the sensing node from the cell
    center.  Surface terms use dedicated z = 0 forms (their z-weighted
    parts vanish identically); the depth terms use the full expressions.
    """
    a, b, x, y, _ = _check_cell_point(half_extents, (delta[0], delta[1], 0.0))
    if not (h_c > 0.0):
        raise InvalidArgumentError("cover thickness must be positive, got %r" % h_c)
    E = params.young_modulus
    nu = params.poisson_ratio
    scale = a + b + abs(x) + abs(y)
    inv_g = 2.0 * (1.0 + nu) / E
    one_m2nu = 1.0 - 2.0 * nu

    jx0 = _surface_tangential_j(a, b, x, y, scale)
    jy0 = _surface_tangential_j(b, a, y, x, scale)
    l0 = _surface_normal_l(a, b, x, y, scale)

    zscale = scale + h_c
    jxh, logxh = _tangential_parts(a, b, x, y, h_c, zscale)
    jyh, logyh = _tangential_parts(b, a, y, x, h_c, zscale)
    lh, arch = _normal_parts(a, b, x, y, h_c, zscale)

    cx = -(1.0 / _4PI) * (one_m2nu * inv_g * (jx0 - jxh) - inv_g * h_c * logxh)
    cy = -(1.0 / _4PI) * (one_m2nu * inv_g * (jy0 - jyh) - inv_g * h_c * logyh)
    cz = (1.0 / _4PI) * (2.0 * (1.0 - nu) * inv_g * (l0 - lh) - inv_g * h_c * arch)
    return np.array([cx, cy, cz])


def love_influence_column(disp_grid, k: int, tract_grid, n: int, params, h_c=None) -> np.ndarray:
    """Column block for sensing node k of one grid and cell n of another."""
    from .grid import node_delta  # local import to avoid a cycle

    if h_c is None:
        h_c = params.nominal_thickness
    cell = tract_grid.cells[n]
    return love_effective_column(
        node_delta(disp_grid, k, tract_grid, n), (cell.a, cell.b), h_c, params
    )


def _quad1(g, lo, hi, tol, breakpoints=None):
    pts = None
    if breakpoints:
        pts = [p for p in breakpoints if lo < p < hi]
        pts = pts or None
    with warnings.catch_warnings():
        # error control happens in the caller's tripwire, not per panel
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(
            g, lo, hi, epsabs=1e-290, epsrel=tol, limit=200, points=pts
        )


def _corner_wedges(f, ext_u, ext_v, tol):
    """Integrate f over [0, ext_u] x [0, ext_v] in polar around the origin.

    The polar Jacobian cancels the inverse-distance singularity at the
    corner, so plain adaptive rules converge.  Returns (value, error).
    """
    if ext_u <= 0.0 or ext_v <= 0.0:
        return 0.0, 0.0
    split = math.atan2(ext_v, ext_u)

    def radial(theta, reach):
        cu = math.cos(theta)
        cv = math.sin(theta)
        val, _ = _quad1(
            lambda r: r * f(r * cu, r * cv), 0.0, reach, max(0.01 * tol, 1e-12)
        )
        return val

    def wedge_a(theta):
        return radial(theta, ext_u / math.cos(theta))

    def wedge_b(theta):
        return radial(theta, ext_v / math.sin(theta))

    va, ea = _quad1(wedge_a, 0.0, split, tol)
    vb, eb = _quad1(wedge_b, split, 0.5 * math.pi, tol)
    return va + vb, ea + eb


def _integrate_cell(f, a, b, x, y, rel_tol):
    """Adaptive quadrature of f(x', y') over the cell; returns (value, error).

    When the in-plane projection (x, y) of the field point lies inside
    the cell, the cell is cut into quadrant rectangles meeting at that
    point and each is integrated in polar coordinates, which absorbs the
    near-field singularity of the potentials.  Otherwise plain nested
    quadrature (with breakpoints at the projection) is used.
    """
    inner_tol = max(0.01 * rel_tol, 1e-13)
    if -a <= x <= a and -b <= y <= b:
        total = 0.0
        err = 0.0
        for su, ext_u in ((1.0, a - x), (-1.0, a + x)):
            for sv, ext_v in ((1.0, b - y), (-1.0, b + y)):
                val, e = _corner_wedges(
                    lambda u, v: f(x + su * u, y + sv * v), ext_u, ext_v, rel_tol
                )
                total += val
                err += e
        return total, err

    def outer(yy):
        val, _ = _quad1(lambda xx: f(xx, yy), -a, a, inner_tol, breakpoints=[x])
        return val

    return _quad1(outer, -b, b, rel_tol, breakpoints=[y])


def love_potential_oracle(p: float, cell, pt, which: str, rel_tol: float = 1e-9) -> float:
    """Brute-force quadrature of one elastic potential over the cell.

    ``which`` selects ``chi`` (log potential) or ``V`` (inverse-distance
    potential).  The log potential needs z + r > 0, so its evaluation
    floors z at 1e-9 m; V is integrable down to z = 0.
    """
    a, b, x, y, z = _check_cell_point(cell, pt)
    if which == "chi":
        z = max(z, ORACLE_Z_FLOOR)

        def f(xx, yy):
            dx = xx - x
            dyv = yy - y
            return math.log(z + math.sqrt(dx * dx + dyv * dyv + z * z))

    elif which == "V":

        def f(xx, yy):
            dx = xx - x
            dyv = yy - y
            return 1.0 / math.sqrt(dx * dx + dyv * dyv + z * z)

    else:
        raise InvalidArgumentError("potential must be 'chi' or 'V', got %r" % which)
    val, err = _integrate_cell(f, a, b, x, y, rel_tol)
    if err > 50.0 * rel_tol * max(abs(val), 1e-300):
        raise OracleFailureError(
            "potential quadrature achieved %.3g relative error, requested %.3g"
            % (err / max(abs(val), 1e-300), rel_tol)
        )
    return p * val
