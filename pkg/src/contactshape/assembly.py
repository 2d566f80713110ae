"""Influence matrix assembly, pseudo-inversion, and disk caching.

The influence matrix C maps node tractions Q to effective displacements
D = C Q.  Assembly visits every (sensing node, traction node) pair with
the scalar kernels of the chosen model; the cost is deliberately one
kernel call per pair so timing scales with the pair count.

Inversion uses a truncated singular value decomposition (the matrix is
dense and modest in size; sparsity is not worth chasing at desk scale).
Assembled matrices and inverse operators can be cached on disk, keyed
by an exact hash of everything that determines their entries.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from . import boussinesq, love
from .errors import InvalidArgumentError, NumericalFailureError, UnsupportedModelError
from .grid import FieldVector, Grid

logger = logging.getLogger(__name__)

MODELS = ("bc", "love")

DEFAULT_SVD_RTOL = 1e-10

# Module-level instrumentation: how many assemblies and factorizations
# actually ran (cache hits must not bump these).
_counters = {"assemblies": 0, "factorizations": 0}


def counters() -> dict:
    return dict(_counters)


def reset_counters() -> None:
    for k in _counters:
        _counters[k] = 0


@dataclass(frozen=True)
class InfluenceMatrix:
    entries: np.ndarray
    model: str
    normal_only: bool
    psi_mode: str
    tract_grid: Grid
    disp_grid: Grid
    params: object
    assembly_seconds: float = 0.0


@dataclass(frozen=True)
class InverseOperator:
    """Moore-Penrose pseudo-inverse of an influence matrix."""

    pinv: np.ndarray
    matrix: InfluenceMatrix
    svd_rtol: float
    rank: int
    singular_values: np.ndarray
    inversion_seconds: float = 0.0


def _validate(model: str, psi_mode: str, params) -> None:
    if model not in MODELS:
        raise UnsupportedModelError("model must be one of %s, got %r" % (MODELS, model))
    if psi_mode not in boussinesq.PSI_MODES:
        raise InvalidArgumentError(
            "psi mode must be one of %s, got %r" % (boussinesq.PSI_MODES, psi_mode)
        )
    if model == "bc":
        boussinesq.require_incompressible(params.poisson_ratio)


def assemble(
    model: str,
    tract_grid: Grid,
    disp_grid: Grid,
    params,
    normal_only: bool = True,
    psi_mode: str = "const",
) -> InfluenceMatrix:
    """Assemble the influence matrix node pair by node pair.

    The cover thickness entering the effective displacement is the
    nominal thickness h_n; per-reading compressed thicknesses only enter
    the capacitance conversion, not the elastic operator.
    """
    _validate(model, psi_mode, params)
    h = params.nominal_thickness
    E = params.young_modulus
    n_disp = len(disp_grid)
    n_tract = len(tract_grid)
    t0 = time.perf_counter()
    if model == "bc":
        if normal_only:
            entries = np.empty((n_disp, n_tract))
            for k, ck in enumerate(disp_grid.cells):
                for l, cl in enumerate(tract_grid.cells):
                    entries[k, l] = boussinesq.bc_resolved_zz(
                        ck.x - cl.x, ck.y - cl.y, cl.area, h, E, psi_mode
                    )
        else:
            entries = np.empty((3 * n_disp, 3 * n_tract))
            for k, ck in enumerate(disp_grid.cells):
                for l, cl in enumerate(tract_grid.cells):
                    entries[3 * k : 3 * k + 3, 3 * l : 3 * l + 3] = (
                        boussinesq.bc_resolved_block(
                            ck.x - cl.x, ck.y - cl.y, cl.area, h, E, psi_mode
                        )
                    )
    else:
        if normal_only:
            entries = np.empty((n_disp, n_tract))
            for k, ck in enumerate(disp_grid.cells):
                for l, cl in enumerate(tract_grid.cells):
                    entries[k, l] = _love_zz(ck, cl, h, params)
        else:
            entries = np.empty((3 * n_disp, n_tract))
            for k, ck in enumerate(disp_grid.cells):
                for l, cl in enumerate(tract_grid.cells):
                    entries[3 * k : 3 * k + 3, l] = love.love_effective_column(
                        (ck.x - cl.x, ck.y - cl.y), (cl.a, cl.b), h, params
                    )
    dt = time.perf_counter() - t0
    _counters["assemblies"] += 1
    return InfluenceMatrix(
        entries, model, normal_only, psi_mode, tract_grid, disp_grid, params, dt
    )


def _love_zz(ck, cl, h, params) -> float:
    """Normal-normal effective coefficient of one Love cell (scalar path)."""
    x = ck.x - cl.x
    y = ck.y - cl.y
    a, b = cl.a, cl.b
    E = params.young_modulus
    nu = params.poisson_ratio
    scale = a + b + abs(x) + abs(y)
    inv_g = 2.0 * (1.0 + nu) / E
    l0 = love._surface_normal_l(a, b, x, y, scale)
    lh, arch = love._normal_parts(a, b, x, y, h, scale + h)
    return (1.0 / (4.0 * math.pi)) * (
        2.0 * (1.0 - nu) * inv_g * (l0 - lh) - inv_g * h * arch
    )


def precompute_inverse(mat: InfluenceMatrix, svd_rtol: float = DEFAULT_SVD_RTOL) -> InverseOperator:
    """Truncated-SVD pseudo-inverse of the influence matrix."""
    if not (svd_rtol > 0.0):
        raise InvalidArgumentError("svd_rtol must be positive")
    t0 = time.perf_counter()
    try:
        u, s, vt = np.linalg.svd(mat.entries, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError("singular value decomposition failed: %s" % exc) from exc
    _counters["factorizations"] += 1
    cutoff = svd_rtol * (s[0] if len(s) else 0.0)
    keep = s > cutoff
    rank = int(np.count_nonzero(keep))
    inv_s = np.zeros_like(s)
    inv_s[keep] = 1.0 / s[keep]
    pinv = (vt.T * inv_s) @ u.T
    dt = time.perf_counter() - t0
    return InverseOperator(pinv, mat, svd_rtol, rank, s, dt)


def apply_forward(mat: InfluenceMatrix, q) -> np.ndarray:
    qv = q.values if isinstance(q, FieldVector) else np.asarray(q, dtype=float)
    if qv.shape != (mat.entries.shape[1],):
        raise InvalidArgumentError(
            "traction vector length %d does not match matrix width %d"
            % (len(qv), mat.entries.shape[1])
        )
    return mat.entries @ qv


def apply_inverse(op: InverseOperator, d) -> np.ndarray:
    dv = d.values if isinstance(d, FieldVector) else np.asarray(d, dtype=float)
    if dv.shape != (op.pinv.shape[1],):
        raise InvalidArgumentError(
            "displacement vector length %d does not match matrix height %d"
            % (len(dv), op.pinv.shape[1])
        )
    return op.pinv @ dv


def _grid_digest(h, grid: Grid) -> None:
    h.update(grid.kind.encode())
    arr = np.array([(c.x, c.y, c.a, c.b) for c in grid.cells])
    h.update(arr.tobytes())


def matrix_key(
    model: str,
    tract_grid: Grid,
    disp_grid: Grid,
    params,
    normal_only: bool,
    psi_mode: str,
) -> str:
    """Exact content hash: any bit difference in the inputs changes it."""
    h = hashlib.sha256()
    h.update(model.encode())
    h.update(b"\x01" if normal_only else b"\x00")
    h.update(psi_mode.encode())
    _grid_digest(h, tract_grid)
    _grid_digest(h, disp_grid)
    pbytes = np.array(
        [
            params.young_modulus,
            params.poisson_ratio,
            params.nominal_thickness,
        ]
    ).tobytes()
    h.update(pbytes)
    return h.hexdigest()


def save_matrix(mat: InfluenceMatrix, cache_dir) -> str:
    """Store entries plus a header describing exactly what they are."""
    import os

    os.makedirs(cache_dir, exist_ok=True)
    key = matrix_key(
        mat.model, mat.tract_grid, mat.disp_grid, mat.params, mat.normal_only, mat.psi_mode
    )
    np.save(os.path.join(cache_dir, key + ".npy"), mat.entries)
    header = {
        "key": key,
        "model": mat.model,
        "normal_only": mat.normal_only,
        "psi_mode": mat.psi_mode,
        "shape": list(mat.entries.shape),
    }
    with open(os.path.join(cache_dir, key + ".json"), "w") as fh:
        json.dump(header, fh, indent=1)
    return key


def load_matrix(
    cache_dir,
    model: str,
    tract_grid: Grid,
    disp_grid: Grid,
    params,
    normal_only: bool = True,
    psi_mode: str = "const",
) -> InfluenceMatrix | None:
    """Cached matrix for exactly these inputs, or None.

    A present-but-inconsistent cache entry is treated as a miss with a
    warning, so callers fall back to re-assembly.
    """
    import os

    key = matrix_key(model, tract_grid, disp_grid, params, normal_only, psi_mode)
    npy = os.path.join(cache_dir, key + ".npy")
    hdr = os.path.join(cache_dir, key + ".json")
    if not (os.path.exists(npy) and os.path.exists(hdr)):
        return None
    try:
        with open(hdr) as fh:
            header = json.load(fh)
        entries = np.load(npy)
    except (OSError, ValueError) as exc:
        logger.warning("unreadable cache entry %s (%s); re-assembling", key, exc)
        return None
    expect_rows = (1 if normal_only else 3) * len(disp_grid)
    expect_cols = len(tract_grid) * (1 if (normal_only or model == "love") else 3)
    if (
        header.get("model") != model
        or header.get("normal_only") != normal_only
        or header.get("psi_mode") != psi_mode
        or entries.shape != (expect_rows, expect_cols)
    ):
        logger.warning("cache entry %s does not match its request; re-assembling", key)
        return None
    return InfluenceMatrix(
        entries, model, normal_only, psi_mode, tract_grid, disp_grid, params, 0.0
    )
