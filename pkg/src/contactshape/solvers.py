"""Constrained solvers: non-negative least squares and inequality projection.

The NNLS solver enforces Q >= 0 on reconstructed tractions (contact can
only push).  It runs block principal pivoting on the KKT system: swap
every infeasible index between the free and active sets at once, and
when the infeasibility count stops improving fall back to swapping only
the largest infeasible index, which cannot cycle.

Fourier-Motzkin elimination projects a system of linear inequalities
a . x >= b onto fewer variables by pairing every lower bound on the
eliminated variable with every upper bound.  It is exponential and only
offered at desk scale, optionally in exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError

NNLS_KKT_RTOL = 1e-10

FME_MAX_VARS = 25
FME_MAX_ROWS = 10**6


@dataclass(frozen=True)
class NnlsOptions:
    max_iterations: int = 300
    kkt_tolerance: float | None = None  # None: 1e-10 * ||C^T d||_inf
    backup_rule_trigger: int = 3  # non-improving full swaps before single pivoting


@dataclass(frozen=True)
class NnlsResult:
    x: np.ndarray
    residual: float
    iterations: int
    converged: bool
    kkt_tolerance: float


def nnls_solve(C, d, options: NnlsOptions | None = None) -> NnlsResult:
    """Minimize ||C x - d|| subject to x >= 0 by block principal pivoting.

    Returns the solution with x clamped exactly non-negative.  If the
    iteration limit is hit the best iterate is returned with
    ``converged`` False rather than raising.
    """
    opts = options or NnlsOptions()
    C = np.asarray(C, dtype=float)
    d = np.asarray(d, dtype=float)
    if C.ndim != 2 or d.ndim != 1 or C.shape[0] != d.shape[0]:
        raise InvalidArgumentError(
            "need a 2-d matrix and matching vector, got %s and %s" % (C.shape, d.shape)
        )
    if not (np.all(np.isfinite(C)) and np.all(np.isfinite(d))):
        raise InvalidArgumentError("matrix and data must be finite")
    if opts.max_iterations < 1 or opts.backup_rule_trigger < 1:
        raise InvalidArgumentError("iteration limits must be positive")

    n = C.shape[1]
    ctd = C.T @ d
    tol = opts.kkt_tolerance
    if tol is None:
        tol = NNLS_KKT_RTOL * max(np.max(np.abs(ctd)), np.finfo(float).tiny)

    free = np.zeros(n, dtype=bool)
    x = np.zeros(n)
    y = -ctd
    best_infeasible = n + 1
    slack = opts.backup_rule_trigger
    iterations = 0
    converged = False
    while iterations < opts.max_iterations:
        iterations += 1
        xtol = 1e-12 * max(np.max(np.abs(x)), 1.0)
        bad_x = free & (x < -xtol)
        bad_y = (~free) & (y < -tol)
        bad = bad_x | bad_y
        n_bad = int(np.count_nonzero(bad))
        if n_bad == 0:
            converged = True
            break
        if n_bad < best_infeasible:
            best_infeasible = n_bad
            slack = opts.backup_rule_trigger
        else:
            slack -= 1
            if slack < 0:
                # single pivoting on the largest infeasible index breaks
                # any cycle the full swaps might fall into
                idx = int(np.nonzero(bad)[0][-1])
                bad = np.zeros(n, dtype=bool)
                bad[idx] = True
        free ^= bad
        x = np.zeros(n)
        if free.any():
            sol, *_ = np.linalg.lstsq(C[:, free], d, rcond=None)
            x[free] = sol
        y = C.T @ (C @ x - d)

    x = np.maximum(x, 0.0)
    residual = float(np.linalg.norm(C @ x - d))
    return NnlsResult(x, residual, iterations, converged, float(tol))


def _as_number(v, exact: bool):
    if exact:
        if isinstance(v, Fraction):
            return v
        if isinstance(v, (int, np.integer)):
            return Fraction(int(v))
        # floats convert to their exact binary value
        return Fraction(v)
    return float(v)


@dataclass(frozen=True)
class InequalitySystem:
    """Rows encode a . x >= b; ``exact`` keeps rational arithmetic."""

    coefficients: tuple
    bounds: tuple
    n_vars: int
    exact: bool = False

    def __post_init__(self):
        if self.n_vars < 1:
            raise InvalidArgumentError("system needs at least one variable")
        for row in self.coefficients:
            if len(row) != self.n_vars:
                raise InvalidArgumentError("row width does not match n_vars")
        if len(self.coefficients) != len(self.bounds):
            raise InvalidArgumentError("row/bound count mismatch")

    @classmethod
    def from_arrays(cls, A, b, exact: bool = False) -> "InequalitySystem":
        rows = tuple(
            tuple(_as_number(v, exact) for v in row) for row in np.atleast_2d(A)
        )
        bounds = tuple(_as_number(v, exact) for v in np.atleast_1d(b))
        n_vars = len(rows[0]) if rows else 0
        return cls(rows, bounds, n_vars, exact)

    @property
    def n_rows(self) -> int:
        return len(self.coefficients)

    def satisfied_by(self, x) -> bool:
        for row, b in zip(self.coefficients, self.bounds):
            if sum(c * xi for c, xi in zip(row, x)) < b:
                return False
        return True


def _dedupe(rows, bounds):
    """Drop exact duplicate rows and trivially true rows (0 . x >= b <= 0)."""
    seen = set()
    out_r, out_b = [], []
    for row, b in zip(rows, bounds):
        if all(c == 0 for c in row) and b <= 0:
            continue
        key = (row, b)
        if key in seen:
            continue
        seen.add(key)
        out_r.append(row)
        out_b.append(b)
    return out_r, out_b


def fme_eliminate(system: InequalitySystem, var: int) -> InequalitySystem:
    """Eliminate one variable; the result keeps the ambient width.

    Every lower-bound row on the variable pairs with every upper-bound
    row; rows not mentioning the variable carry over.  The eliminated
    column is identically zero afterwards.
    """
    if not (0 <= var < system.n_vars):
        raise InvalidArgumentError("variable index %d out of range" % var)
    if system.n_vars > FME_MAX_VARS:
        raise ResourceLimitError(
            "%d variables exceeds the desk-scale limit of %d"
            % (system.n_vars, FME_MAX_VARS)
        )
    if system.n_rows > FME_MAX_ROWS:
        raise ResourceLimitError(
            "%d rows exceeds the desk-scale limit of %d" % (system.n_rows, FME_MAX_ROWS)
        )
    lower, upper, rest = [], [], []
    for row, b in zip(system.coefficients, system.bounds):
        c = row[var]
        if c > 0:
            lower.append((row, b))
        elif c < 0:
            upper.append((row, b))
        else:
            rest.append((row, b))
    produced = len(lower) * len(upper) + len(rest)
    if produced > FME_MAX_ROWS:
        raise ResourceLimitError(
            "eliminating variable %d would produce %d rows (pairing %d lower with "
            "%d upper bounds); worst case for %d rows over %d step(s) is %s"
            % (
                var,
                produced,
                len(lower),
                len(upper),
                system.n_rows,
                1,
                fme_worst_case_count(system.n_rows, 1),
            )
        )
    zero = Fraction(0) if system.exact else 0.0
    new_rows, new_bounds = [], []
    for row, b in rest:
        new_rows.append(row)
        new_bounds.append(b)
    for lrow, lb in lower:
        lc = lrow[var]
        for urow, ub in upper:
            uc = -urow[var]
            # scale each row by its positive 1/|coefficient| and add
            row = tuple(
                (lv / lc + uv / uc) if i != var else zero
                for i, (lv, uv) in enumerate(zip(lrow, urow))
            )
            new_rows.append(row)
            new_bounds.append(lb / lc + ub / uc)
    new_rows, new_bounds = _dedupe(new_rows, new_bounds)
    return InequalitySystem(tuple(new_rows), tuple(new_bounds), system.n_vars, system.exact)


def fme_eliminate_all(system: InequalitySystem, order=None):
    """Eliminate every variable; returns (final system, row counts per step)."""
    if order is None:
        order = range(system.n_vars)
    counts = [system.n_rows]
    for var in order:
        system = fme_eliminate(system, var)
        counts.append(system.n_rows)
    return system, counts


def fme_feasible(system: InequalitySystem) -> bool:
    """Feasibility of a fully projected system (no variables left).

    After eliminating every variable all rows are constant; the system
    is feasible exactly when no row demands 0 >= b with b > 0.
    """
    for row, b in zip(system.coefficients, system.bounds):
        if any(c != 0 for c in row):
            raise InvalidArgumentError(
                "system still mentions variables; eliminate them first"
            )
        if b > 0:
            return False
    return True


def fme_worst_case_count(n: int, p: int):
    """Worst-case row count after p elimination steps from n rows.

    Exact arithmetic: 4 * (n/4)**(2*p) as an integer when it divides
    evenly, else a Fraction.  Zero steps leave the n rows untouched.
    """
    if n < 0 or p < 0:
        raise InvalidArgumentError("row and step counts must be non-negative")
    if p == 0:
        return n
    v = Fraction(4 * n ** (2 * p), 4 ** (2 * p))
    return int(v) if v.denominator == 1 else v
