# optimizer.py
# ============================================================================
# Constrained Descent over Probability Polytopes
# ============================================================================
#
# Points are flat vectors x >= 0 with A x = b. The polytope is handled by an
# affine least-squares projection (pseudo-inverse of the independent rows),
# alternated with clipping, and descent is a projected gradient on the face
# of currently free coordinates.

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space, pinv, qr

from config import (
    ARMIJO_C1,
    DEFAULT_FEASIBILITY_TOLERANCE,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE_BITS,
    DEFAULT_WORKERS,
    DIRECTION_FLOOR,
    GRADIENT_ZERO_FLOOR,
    INITIAL_STEP,
    MAX_PROJECTION_ROUNDS,
    MAX_TOLERANCE_BITS,
    MIN_STEP,
    NEGATIVE_SLACK,
    RAKE_ROUNDS,
    RAKE_TOLERANCE,
    RANK_TOLERANCE,
    STALL_ITERATIONS,
)


class OptimizerError(RuntimeError):
    """Optimizer misuse or an objective that misbehaves at a feasible point"""


class ProjectionError(OptimizerError):
    """Alternating projection did not reach the feasible set"""

    def __init__(self, residual, rounds):
        self.residual = residual
        self.rounds = rounds
        super().__init__(f"projection did not converge after {rounds} rounds (residual norm {residual:.3e})")


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = DEFAULT_RESTARTS
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    tolerance_bits: float = DEFAULT_TOLERANCE_BITS
    feasibility_tolerance: float = DEFAULT_FEASIBILITY_TOLERANCE
    seed: int = DEFAULT_SEED
    workers: int = DEFAULT_WORKERS

    def __post_init__(self):
        if self.restarts < 0:
            raise ValueError(f"restarts must be >= 0, got {self.restarts}")
        if self.max_iterations <= 0:
            raise ValueError(f"max_iterations must be positive, got {self.max_iterations}")
        if not 0 < self.tolerance_bits <= MAX_TOLERANCE_BITS:
            raise ValueError(f"tolerance_bits must be in (0, {MAX_TOLERANCE_BITS}], got {self.tolerance_bits}")
        if self.feasibility_tolerance <= 0:
            raise ValueError(f"feasibility_tolerance must be positive, got {self.feasibility_tolerance}")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")
        if self.workers <= 0:
            raise ValueError(f"workers must be positive, got {self.workers}")


class ConstraintSystem:
    """
    Linear equalities A x = b over `dimension` nonnegative coordinates.

    Rows may be grouped; rows of one group partition the coordinates they
    touch and their right-hand sides sum to 1 (one group per marginal).
    Redundant rows are kept for residual checks but dropped from the
    projection factorization.
    """

    def __init__(self, matrix, rhs, groups: Optional[Sequence[Sequence[int]]] = None):
        matrix = np.atleast_2d(np.array(matrix, dtype=float))
        rhs = np.array(rhs, dtype=float).ravel()
        if matrix.shape[0] != rhs.shape[0]:
            raise OptimizerError(f"{matrix.shape[0]} rows but {rhs.shape[0]} right-hand values")
        if np.any(rhs < -NEGATIVE_SLACK) or np.any(rhs > 1 + NEGATIVE_SLACK):
            raise OptimizerError("right-hand values must be probabilities")

        self.groups = tuple(tuple(group) for group in (groups or [range(len(rhs))]))
        for group in self.groups:
            total = math.fsum(rhs[list(group)])
            if abs(total - 1.0) > 1e-12:
                raise OptimizerError(f"constraint group sums to {total:.15g}, expected 1")

        self.matrix = matrix
        self.rhs = rhs
        self.matrix.flags.writeable = False
        self.rhs.flags.writeable = False

        # Rank-revealing QR on the transpose picks a maximal independent row set
        _, r, pivots = qr(matrix.T, mode="economic", pivoting=True)
        diagonal = np.abs(np.diag(r))
        rank = int(np.sum(diagonal > RANK_TOLERANCE * diagonal[0])) if diagonal.size else 0
        self.independent_rows = np.sort(pivots[:rank])
        self._reduced = matrix[self.independent_rows]
        self._reduced_rhs = rhs[self.independent_rows]
        self._pinv = pinv(self._reduced)

    @classmethod
    def simplex(cls, dimension):
        """Just the probability simplex"""
        return cls(np.ones((1, dimension)), [1.0])

    @property
    def dimension(self):
        return self.matrix.shape[1]

    @property
    def rank(self):
        return len(self.independent_rows)

    @property
    def equalities(self):
        """Rows as (coordinate indices, right-hand value) pairs"""
        return [(tuple(np.flatnonzero(row)), float(value)) for row, value in zip(self.matrix, self.rhs)]

    def residual(self, x) -> float:
        return float(np.linalg.norm(self.matrix @ x - self.rhs))

    def affine_project(self, x):
        """Closest point of the affine hull A x = b"""
        return x - self._pinv @ (self._reduced @ x - self._reduced_rhs)

    def tangent_basis(self, free_mask):
        """Orthonormal basis of directions moving only free coordinates"""
        columns = self._reduced[:, free_mask]
        if not free_mask.any():
            return np.zeros((self.dimension, 0))
        local = null_space(columns, rcond=RANK_TOLERANCE) if columns.shape[0] else np.eye(columns.shape[1])
        basis = np.zeros((self.dimension, local.shape[1]))
        basis[free_mask] = local
        return basis


def project_feasible(point, cs: ConstraintSystem, tolerance=DEFAULT_FEASIBILITY_TOLERANCE):
    """Nonnegative point satisfying every equality within tolerance"""
    x = np.array(point, dtype=float).ravel()
    if x.shape[0] != cs.dimension:
        raise OptimizerError(f"point has length {x.shape[0]}, system has dimension {cs.dimension}")
    if np.all(x >= 0) and cs.residual(x) <= tolerance:
        return x

    for _ in range(MAX_PROJECTION_ROUNDS):
        x = np.clip(cs.affine_project(x), 0.0, None)
        if cs.residual(x) <= tolerance:
            return x
    raise ProjectionError(cs.residual(x), MAX_PROJECTION_ROUNDS)


def rake(point, cs: ConstraintSystem, tolerance=RAKE_TOLERANCE, max_rounds=RAKE_ROUNDS):
    """
    Iterative proportional fitting onto the grouped equalities.

    Each row rescales the coordinates it covers to hit its right-hand side.
    Rows covering only zeros are left alone. Returns the raked point and
    the number of sweeps used.
    """
    x = np.array(point, dtype=float).ravel()
    rows = [(cs.matrix[r] > 0, cs.rhs[r]) for group in cs.groups for r in group]

    def calc_diff(a, b):
        return np.abs(a - b).sum()

    previous = x + 1.0
    sweeps = 0
    while calc_diff(x, previous) > tolerance and sweeps < max_rounds:
        previous = x.copy()
        for loc, target in rows:
            current = x[loc].sum()
            if current > 0:
                x[loc] *= target / current
        sweeps += 1
    return x, sweeps


@dataclass(frozen=True)
class Oracle:
    """Objective and gradient over the flat coordinate vector"""

    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DescentRun:
    start_index: int
    point: np.ndarray
    value: float
    trace: Tuple[float, ...]
    iterations: int
    converged: bool


@dataclass(frozen=True)
class MinimizeResult:
    point: np.ndarray
    value: float
    trace: Tuple[float, ...]
    converged: bool
    start_index: int
    runs: Tuple[DescentRun, ...] = field(repr=False, default=())


def _checked_value(oracle, x):
    value = float(oracle.value(x))
    if not math.isfinite(value):
        raise OptimizerError(f"objective is not finite ({value}) at a feasible point")
    return value


def _descent_direction(gradient, x, cs, bases):
    """
    Projected negative gradient that keeps zero coordinates nonnegative.

    Coordinates at zero that the direction would push negative are fixed
    and the projection is recomputed on the remaining face.
    """
    free = np.ones(cs.dimension, dtype=bool)
    at_zero = x <= 0
    while True:
        key = free.tobytes()
        if key not in bases:
            bases[key] = cs.tangent_basis(free)
        basis = bases[key]
        if basis.shape[1] == 0:
            return np.zeros(cs.dimension)
        direction = -basis @ (basis.T @ gradient)
        blocking = at_zero & free & (direction < -DIRECTION_FLOOR)
        if not blocking.any():
            return direction
        free &= ~blocking


def _descend(oracle: Oracle, cs: ConstraintSystem, start, cfg: OptimizerConfig, start_index=0):
    x = project_feasible(start, cs, cfg.feasibility_tolerance)
    f = _checked_value(oracle, x)
    trace = [f]
    bases = {}
    stall = 0
    converged = False

    iteration = 0
    for iteration in range(1, cfg.max_iterations + 1):
        gradient = np.asarray(oracle.gradient(x), dtype=float)
        direction = _descent_direction(gradient, x, cs, bases)
        slope = float(gradient @ direction)
        if np.linalg.norm(direction) <= DIRECTION_FLOOR or slope >= 0:
            converged = True
            break

        # Ratio test: the longest step that keeps every coordinate >= 0
        shrinking = direction < 0
        ratios = -x[shrinking] / direction[shrinking]
        alpha_max = float(ratios.min()) if ratios.size else math.inf
        step = min(INITIAL_STEP, alpha_max)

        accepted = None
        while step >= MIN_STEP:
            trial = x + step * direction
            if step == alpha_max:
                blocking = np.flatnonzero(shrinking)[ratios <= alpha_max]
                trial[blocking] = 0.0
            trial[trial < GRADIENT_ZERO_FLOOR] = 0.0
            trial_value = _checked_value(oracle, trial)
            if trial_value <= f + ARMIJO_C1 * step * slope:
                accepted = (trial, trial_value)
                break
            step /= 2.0

        if accepted is None:
            converged = True
            break

        x, new_f = accepted
        stall = stall + 1 if abs(f - new_f) < cfg.tolerance_bits else 0
        f = new_f
        trace.append(f)
        if stall >= STALL_ITERATIONS:
            converged = True
            break

    x = project_feasible(x, cs, cfg.feasibility_tolerance)
    return DescentRun(start_index, x, _checked_value(oracle, x), tuple(trace), iteration, converged)


def minimize(oracle: Oracle, cs: ConstraintSystem, starts: Sequence, cfg: OptimizerConfig) -> MinimizeResult:
    """
    Run one descent per start and keep the lowest objective.

    Ties go to the earliest start, so the result does not depend on the
    order in which parallel runs finish.
    """
    starts = list(starts)
    if not starts:
        raise OptimizerError("minimize needs at least one start")

    if cfg.workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            runs = list(pool.map(lambda item: _descend(oracle, cs, item[1], cfg, item[0]),
                                 enumerate(starts)))
    else:
        runs = [_descend(oracle, cs, start, cfg, index) for index, start in enumerate(starts)]

    best = min(runs, key=lambda run: (run.value, run.start_index))
    return MinimizeResult(best.point, best.value, best.trace, best.converged, best.start_index, tuple(runs))
