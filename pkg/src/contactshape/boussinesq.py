"""Point-load elastic model for an incompressible half space.

For nu = 1/2 the surface-load displacement field at a point (x, y, z)
due to a concentrated force (Fx, Fy, Fz) at the origin reduces to

    ux = 3/(4 pi E) * [Fx (1/rho + x^2/rho^3) + Fy x y/rho^3 + Fz x z/rho^3]
    uy = 3/(4 pi E) * [Fx x y/rho^3 + Fy (1/rho + y^2/rho^3) + Fz y z/rho^3]
    uz = 3/(4 pi E) * [Fx x z/rho^3 + Fy y z/rho^3 + Fz (1/rho + z^2/rho^3)]

with rho = sqrt(x^2 + y^2 + z^2).  What the capacitive layer senses is
the effective displacement: the field at the surface minus the field at
depth h_c (the compressed cover thickness), because the taxel electrode
rides on the bottom of the cover.  Subtracting the two evaluations gives
nine closed-form influence coefficients per node pair.

Five of those coefficients diverge when the two nodes are vertically
aligned.  An approximate solution spreads the force over the cell area
(radius-equivalent scale z0 = sqrt(3 A / (2 pi))) and stays finite; each
coefficient is resolved by keeping whichever candidate has the smaller
magnitude, which switches from the approximate value near the axis to
the exact value in the far field.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidArgumentError, SingularPointError, UnsupportedModelError

PSI_MODES = ("const", "exact")

# Psi coefficients of the spread-load depth profile, and its flat-mode value.
PSI_SLOPE = 0.2431
PSI_OFFSET = 0.1814
PSI_CONST = 0.25

_SUPPORTED_NU = 0.5


def require_incompressible(nu: float) -> None:
    """This model is only valid for nu = 1/2."""
    if nu != _SUPPORTED_NU:
        raise UnsupportedModelError(
            "point-load model requires poisson_ratio = 0.5, got %r" % nu
        )


def psi(x: float, mode: str = "const") -> float:
    """Depth decay factor Psi of the spread-load solution.

    ``exact`` evaluates Psi(x) = (0.2431 x - 0.1814) / x for x > 0;
    ``const`` uses the flat approximation 0.25 (Psi tends to 0.2431 for
    large x, and 0.25 is the convenient round value used for design).
    """
    if mode == "const":
        return PSI_CONST
    if mode == "exact":
        if not (x > 0.0):
            raise InvalidArgumentError("psi exact mode needs x > 0, got %r" % x)
        return (PSI_SLOPE * x - PSI_OFFSET) / x
    raise InvalidArgumentError("psi mode must be one of %s" % (PSI_MODES,))


def bc_point_displacement(force, offset, young_modulus: float) -> np.ndarray:
    """Displacement vector (ux, uy, uz) at ``offset`` from a point force.

    ``offset`` is (x, y, z) from the load application point; the load
    acts on the surface z = 0, displacements are sought at z >= 0.
    """
    fx, fy, fz = (float(f) for f in force)
    x, y, z = (float(c) for c in offset)
    if z < 0.0:
        raise InvalidArgumentError("depth z must be non-negative, got %r" % z)
    rho2 = x * x + y * y + z * z
    if rho2 == 0.0:
        raise SingularPointError("point-load displacement diverges at the load point")
    rho = math.sqrt(rho2)
    rho3 = rho2 * rho
    k = 3.0 / (4.0 * math.pi * young_modulus)
    ux = k * (fx * (1.0 / rho + x * x / rho3) + fy * x * y / rho3 + fz * x * z / rho3)
    uy = k * (fx * x * y / rho3 + fy * (1.0 / rho + y * y / rho3) + fz * y * z / rho3)
    uz = k * (fx * x * z / rho3 + fy * y * z / rho3 + fz * (1.0 / rho + z * z / rho3))
    return np.array([ux, uy, uz])


def bc_effective_block(x: float, y: float, h_c: float, young_modulus: float) -> np.ndarray:
    """Exact 3x3 effective-displacement block for one node pair.

    Row r, column c holds the effective displacement component r at the
    sensing node per unit force component c on the traction node, the
    nodes being offset by (x, y) in plane with cover thickness h_c.
    Entries that diverge at x = y = 0 are reported as +inf sentinels.
    """
    if not (h_c > 0.0):
        raise InvalidArgumentError("cover thickness must be positive, got %r" % h_c)
    k = 3.0 / (4.0 * math.pi * young_modulus)
    s = x * x + y * y
    h2 = h_c * h_c
    t = s + h2
    t32 = t * math.sqrt(t)
    if s == 0.0:
        inf = math.inf
        return np.array(
            [
                [inf, inf, 0.0],
                [inf, inf, 0.0],
                [0.0, 0.0, inf],
            ]
        )
    s32 = s * math.sqrt(s)
    x2 = x * x
    y2 = y * y
    c00 = k * ((2.0 * x2 + y2) / s32 - (2.0 * x2 + y2 + h2) / t32)
    c01 = k * (x * y / s32 - x * y / t32)
    c02 = k * (-x * h_c / t32)
    c11 = k * ((x2 + 2.0 * y2) / s32 - (x2 + 2.0 * y2 + h2) / t32)
    c12 = k * (-y * h_c / t32)
    c22 = k * (1.0 / math.sqrt(s) - (s + 2.0 * h2) / t32)
    return np.array(
        [
            [c00, c01, c02],
            [c01, c11, c12],
            [c02, c12, c22],
        ]
    )


def spread_radius(cell_area: float) -> float:
    """Equivalent spreading scale z0 = sqrt(3 A / (2 pi)) of a cell."""
    if not (cell_area > 0.0):
        raise InvalidArgumentError("cell area must be positive, got %r" % cell_area)
    return math.sqrt(1.5 * cell_area / math.pi)


def bc_approx_coefficients(
    cell_area: float, h_c: float, young_modulus: float, psi_mode: str = "const"
) -> tuple[float, float]:
    """Finite per-unit-force coefficients (tangential, normal).

    These come from spreading the force over the cell and keeping the
    on-axis response; they couple each force component only to its own
    displacement component.
    """
    z0 = spread_radius(cell_area)
    p = psi(h_c / z0, psi_mode)
    base = 9.0 / (4.0 * math.pi * young_modulus * z0) * p
    return (base, 2.0 * base)


def bc_approx_displacement(
    force, cell_area: float, h_c: float, young_modulus: float, psi_mode: str = "const"
) -> np.ndarray:
    """Effective displacement of the spread-load solution (on axis)."""
    ct, cn = bc_approx_coefficients(cell_area, h_c, young_modulus, psi_mode)
    fx, fy, fz = (float(f) for f in force)
    return np.array([ct * fx, ct * fy, cn * fz])


def bc_resolved_coefficient(exact: float, approx: float) -> float:
    """Pick the candidate with the smaller magnitude.

    Continuous switch between the approximate value near the axis and
    the exact value in the far field; an inf sentinel always loses.
    """
    return exact if abs(exact) <= abs(approx) else approx


def bc_resolved_block(
    x: float,
    y: float,
    cell_area: float,
    h_c: float,
    young_modulus: float,
    psi_mode: str = "const",
) -> np.ndarray:
    """Resolved (finite) 3x3 block for one node pair.

    The spread-load solution only offers candidates for the diagonal;
    off-diagonal couplings keep the exact value, which is finite except
    exactly on the axis where the sentinel resolves to the approximate
    solution's implied zero.
    """
    blk = bc_effective_block(x, y, h_c, young_modulus)
    ct, cn = bc_approx_coefficients(cell_area, h_c, young_modulus, psi_mode)
    blk[0, 0] = bc_resolved_coefficient(blk[0, 0], ct)
    blk[1, 1] = bc_resolved_coefficient(blk[1, 1], ct)
    blk[2, 2] = bc_resolved_coefficient(blk[2, 2], cn)
    blk[~np.isfinite(blk)] = 0.0
    return blk


def bc_resolved_zz(
    x: float,
    y: float,
    cell_area: float,
    h_c: float,
    young_modulus: float,
    psi_mode: str = "const",
) -> float:
    """Resolved normal-normal coefficient only (the usual sensing mode)."""
    if not (h_c > 0.0):
        raise InvalidArgumentError("cover thickness must be positive, got %r" % h_c)
    _, cn = bc_approx_coefficients(cell_area, h_c, young_modulus, psi_mode)
    s = x * x + y * y
    if s == 0.0:
        return cn
    h2 = h_c * h_c
    t = s + h2
    k = 3.0 / (4.0 * math.pi * young_modulus)
    exact = k * (1.0 / math.sqrt(s) - (s + 2.0 * h2) / (t * math.sqrt(t)))
    return bc_resolved_coefficient(exact, cn)


def bc_switch_radius(
    cell_area: float, h_c: float, young_modulus: float, psi_mode: str = "const"
) -> float:
    """Radius where the normal-normal resolution hands over to the exact value.

    Diagnostic: below the returned radius the approximate candidate has
    the smaller magnitude, above it the exact value does.
    """
    _, cn = bc_approx_coefficients(cell_area, h_c, young_modulus, psi_mode)

    def wins_exact(r):
        return abs(_exact_zz(r, h_c, young_modulus)) <= cn

    r_hi = h_c + spread_radius(cell_area)
    while not wins_exact(r_hi):
        r_hi *= 2.0
        if r_hi > 1e6 * h_c:
            raise InvalidArgumentError("no handover radius found (approx never loses)")
    r_lo = r_hi
    while wins_exact(r_lo):
        r_lo *= 0.5
        if r_lo < 1e-12 * h_c:
            raise InvalidArgumentError("no handover radius found (exact never loses)")
    for _ in range(200):
        mid = 0.5 * (r_lo + r_hi)
        if wins_exact(mid):
            r_hi = mid
        else:
            r_lo = mid
    return 0.5 * (r_lo + r_hi)


def _exact_zz(r: float, h_c: float, young_modulus: float) -> float:
    h2 = h_c * h_c
    s = r * r
    t = s + h2
    k = 3.0 / (4.0 * math.pi * young_modulus)
    return k * (1.0 / r - (s + 2.0 * h2) / (t * math.sqrt(t)))
