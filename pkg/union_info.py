# union_info.py
# ============================================================================
# Union Information, Synergy Interval and Two-Predictor Decomposition
# ============================================================================

import itertools
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.special import rel_entr

from classic_measures import s_max, singleton_information, whole_information
from config import (
    DIRICHLET_CONCENTRATION,
    LOWER_BOUND_SLACK,
    MAX_INTERSECTION_PREDICTORS,
)
from info_theory import LN2, grouped_mass, marginal, mutual_information, product_of_conditionals
from joint_table import DistributionError, JointTable, ensure_finite
from optimizer import (
    ConstraintSystem,
    OptimizerConfig,
    OptimizerError,
    Oracle,
    minimize,
    rake,
)


@dataclass(frozen=True)
class UnionInfoResult:
    upper_bound_table: JointTable
    upper_bound_value: float
    best_value: float
    best_table: JointTable
    converged: bool
    restarts_used: int


@dataclass(frozen=True)
class SvkInterval:
    lower: float
    best: float
    upper: float
    converged: bool = True


@dataclass(frozen=True)
class Pid2:
    redundancy: float
    unique1: float
    unique2: float
    synergy: float

    def total(self):
        return self.redundancy + self.unique1 + self.unique2 + self.synergy


def duplicate_predictors(table: JointTable) -> Dict[int, Tuple[int, np.ndarray]]:
    """
    Predictors that are a one-to-one relabeling of an earlier predictor.

    Maps the later predictor's position to (earlier position, states), where
    states[k] is the later state paired with state k of the earlier one and
    -1 marks an earlier state that never occurs.
    """
    names = table.predictor_names
    duplicates = {}
    for j in range(len(names)):
        for i in range(j):
            if i in duplicates:
                continue
            positive = grouped_mass(table, names[i], names[j]) > 0
            if (positive.sum(axis=1) <= 1).all() and (positive.sum(axis=0) <= 1).all():
                duplicates[j] = (i, np.where(positive.any(axis=1), positive.argmax(axis=1), -1))
                break
    return duplicates


def analytic_upper_bound(table: JointTable) -> JointTable:
    """
    Pr(y) * prod_i Pr(x_i|y) over the distinct predictors, with every exact
    duplicate copied from the predictor it relabels. Feasible for the
    union-information problem.
    """
    table.require_target()
    duplicates = duplicate_predictors(table)
    if not duplicates:
        return product_of_conditionals(table)

    n = table.n_predictors
    distinct = [k for k in range(n) if k not in duplicates]
    reduced = product_of_conditionals(
        marginal(table, [table.predictor_names[k] for k in distinct] + [table.target_name]))

    mass = np.zeros(table.shape)
    for cell in zip(*np.nonzero(reduced.mass)):
        full = [0] * (n + 1)
        for position, k in enumerate(distinct):
            full[k] = cell[position]
        full[n] = cell[-1]
        for j in sorted(duplicates):
            i, states = duplicates[j]
            full[j] = states[full[i]]
        mass[tuple(full)] = reduced.mass[cell]
    return JointTable(table.predictor_axes, table.target_axis, mass)


class UnionProblem:
    """
    The union-information minimization restricted to the support of the
    product of conditionals, which contains the support of every feasible
    joint. Coordinates are the positive cells of that product in C order.
    """

    def __init__(self, table: JointTable):
        table.require_target()
        self.table = table
        self.upper_bound = analytic_upper_bound(table)
        self.shape = table.shape
        n = table.n_predictors

        self.support = np.flatnonzero(product_of_conditionals(table).mass.ravel() > 0)
        cells = np.unravel_index(self.support, self.shape)
        self.x_index = np.ravel_multi_index(cells[:n], self.shape[:n])
        self.y_index = cells[n]
        self.n_x = int(np.prod(self.shape[:n]))
        self.n_y = self.shape[n]

        mass = np.asarray(table.mass) / math.fsum(table.mass.ravel())
        rows, rhs, groups = [], [], []
        for i in range(n):
            pair = mass.sum(axis=tuple(a for a in range(n) if a != i))
            group = []
            for x_i, y in zip(*np.nonzero(pair)):
                group.append(len(rows))
                rows.append(((cells[i] == x_i) & (cells[n] == y)).astype(float))
                rhs.append(pair[x_i, y])
            groups.append(group)
        self.constraints = ConstraintSystem(np.array(rows), rhs, groups)
        self.oracle = Oracle(self.value, self.gradient)

    @property
    def dimension(self):
        return len(self.support)

    def restrict(self, full_mass):
        return np.asarray(full_mass, dtype=float).ravel()[self.support]

    def embed(self, point) -> JointTable:
        full = np.zeros(int(np.prod(self.shape)))
        full[self.support] = point
        return JointTable(self.table.predictor_axes, self.table.target_axis, full.reshape(self.shape))

    def _marginals(self, point):
        p_x = np.bincount(self.x_index, weights=point, minlength=self.n_x)
        p_y = np.bincount(self.y_index, weights=point, minlength=self.n_y)
        return p_x[self.x_index], p_y[self.y_index]

    def value(self, point):
        """I*(X:Y) in bits"""
        p_x, p_y = self._marginals(point)
        return float(rel_entr(point, p_x * p_y).sum() / LN2)

    def gradient(self, point):
        p_x, p_y = self._marginals(point)
        gradient = np.zeros_like(point)
        positive = point > 0
        gradient[positive] = (np.log(point[positive]) - np.log(p_x[positive])
                              - np.log(p_y[positive]) - 1.0) / LN2
        return gradient

    def starts(self, cfg: OptimizerConfig):
        """Analytic bound, the source table, then seeded perturbations of the bound"""
        upper = self.restrict(self.upper_bound.mass)
        starts = [upper, self.restrict(self.table.mass)]
        rng = np.random.default_rng(cfg.seed)
        for _ in range(cfg.restarts):
            weights = rng.dirichlet(np.full(self.dimension, DIRICHLET_CONCENTRATION))
            raked, _ = rake(upper * weights * self.dimension, self.constraints)
            starts.append(raked)
        return starts


def minimize_union_information(table: JointTable, cfg: Optional[OptimizerConfig] = None) -> UnionInfoResult:
    """Smallest I*(X:Y) over joints that keep every (X_i, Y) marginal"""
    cfg = cfg or OptimizerConfig()
    table.require_target()
    predictors, target = table.predictor_names, table.target_name
    upper = analytic_upper_bound(table)
    upper_value = mutual_information(upper, predictors, target)

    # A single predictor leaves nothing to trade off
    if table.n_predictors == 1:
        value = mutual_information(table, predictors, target)
        return UnionInfoResult(upper, upper_value, value, table, True, 0)

    problem = UnionProblem(table)
    result = minimize(problem.oracle, problem.constraints, problem.starts(cfg), cfg)
    best_table = problem.embed(result.point)
    best_value = ensure_finite(mutual_information(best_table, predictors, target), "union information")

    floor = max(singleton_information(table))
    if best_value < floor - LOWER_BOUND_SLACK:
        raise OptimizerError(
            f"union information {best_value:.9f} fell below the largest singleton {floor:.9f}")

    return UnionInfoResult(upper, upper_value, best_value, best_table, result.converged, len(result.runs))


def union_information(table: JointTable, cfg: Optional[OptimizerConfig] = None) -> float:
    return minimize_union_information(table, cfg).best_value


def s_vk(table: JointTable, cfg: Optional[OptimizerConfig] = None,
         union: Optional[UnionInfoResult] = None) -> SvkInterval:
    """Synergy as whole minus union, bracketed by the analytic bound and S_max"""
    table.require_target(min_predictors=2)
    union = union or minimize_union_information(table, cfg)
    whole = whole_information(table)
    return SvkInterval(
        lower=whole - union.upper_bound_value,
        best=whole - union.best_value,
        upper=s_max(table),
        converged=union.converged,
    )


def intersection_information(table: JointTable, cfg: Optional[OptimizerConfig] = None) -> float:
    """Inclusion-exclusion of union information over every predictor subset"""
    table.require_target()
    n = table.n_predictors
    if n > MAX_INTERSECTION_PREDICTORS:
        raise DistributionError(
            f"intersection information is limited to {MAX_INTERSECTION_PREDICTORS} predictors "
            f"(got {n}); decompose predictor pairs with pid2 instead")

    total = 0.0
    for size in range(1, n + 1):
        for subset in itertools.combinations(table.predictor_names, size):
            sub_table = marginal(table, subset + (table.target_name,))
            total += (-1) ** (size + 1) * union_information(sub_table, cfg)
    return ensure_finite(total, "intersection information")


def pid2(table: JointTable, cfg: Optional[OptimizerConfig] = None,
         union: Optional[UnionInfoResult] = None) -> Pid2:
    if table.n_predictors != 2:
        raise DistributionError(f"pid2 needs exactly 2 predictors, table has {table.n_predictors}")
    table.require_target(min_predictors=2)
    union = union or minimize_union_information(table, cfg)
    first, second = singleton_information(table)
    redundancy = first + second - union.best_value
    return Pid2(
        redundancy=redundancy,
        unique1=first - redundancy,
        unique2=second - redundancy,
        synergy=whole_information(table) - union.best_value,
    )
