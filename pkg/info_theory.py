# info_theory.py
# ============================================================================
# Shannon Information Primitives (all results in bits)
# ============================================================================

import math

import numpy as np
from scipy.special import entr, rel_entr

from config import ZERO_PROBABILITY
from joint_table import DistributionError, JointTable, ensure_finite

LN2 = math.log(2.0)


def _names(names):
    """Accept a single axis name or any iterable of names"""
    if isinstance(names, str):
        return (names,)
    return tuple(names)


def grouped_mass(table: JointTable, *groups):
    """
    Marginal mass with each group of axes flattened into one dimension.

    The result has one dimension per group, in group order. Groups must be
    disjoint; an empty group becomes a dimension of size 1.
    """
    positions = [[table.axis_position(name) for name in _names(group)] for group in groups]
    flat = [p for group in positions for p in group]
    if len(set(flat)) != len(flat):
        raise DistributionError(f"axis groups overlap: {[list(_names(g)) for g in groups]}")

    kept = sorted(flat)
    dropped = tuple(p for p in range(len(table.axes)) if p not in kept)
    mass = table.mass.sum(axis=dropped) if dropped else np.asarray(table.mass)
    mass = np.transpose(mass, [kept.index(p) for p in flat])

    sizes = [int(np.prod([table.shape[p] for p in group])) for group in positions]
    return mass.reshape(sizes)


def marginal(table: JointTable, keep) -> JointTable:
    """Sum out every axis not named in keep; roles and axis order are preserved"""
    keep = set(_names(keep))
    if not keep:
        raise DistributionError("marginal needs at least one axis to keep")
    positions = table.positions(keep)
    dropped = tuple(p for p in range(len(table.axes)) if p not in positions)
    mass = table.mass.sum(axis=dropped) if dropped else table.mass

    predictors = [axis for axis in table.predictor_axes if axis.name in keep]
    target = table.target_axis if table.target_name in keep else None
    return JointTable(predictors, target, mass)


def conditional(table: JointTable, given_axis: str, given_state) -> JointTable:
    """Distribution of the remaining axes given one axis takes one state"""
    position = table.axis_position(given_axis)
    axis = table.axes[position]
    if len(table.axes) < 2:
        raise DistributionError("conditioning would leave no axes")

    index = axis.index(given_state)
    mass = np.take(table.mass, index, axis=position)
    total = math.fsum(mass.ravel())
    if total <= ZERO_PROBABILITY:
        raise DistributionError(f"cannot condition on {given_axis}={given_state}: probability is 0")

    predictors = [a for a in table.predictor_axes if a.name != given_axis]
    target = table.target_axis if table.target_name != given_axis else None
    return JointTable(predictors, target, mass / total)


def entropy(table: JointTable, axes=None) -> float:
    """H of the named axes (all axes when omitted); 0 log 0 counts as 0"""
    names = table.axis_names if axes is None else _names(axes)
    if not names:
        return 0.0
    p = grouped_mass(table, names).ravel()
    return ensure_finite(entr(p).sum() / LN2, "entropy")


def mutual_information(table: JointTable, a, b) -> float:
    a, b = _names(a), _names(b)
    if not a or not b:
        raise DistributionError("mutual information needs two non-empty axis sets")
    if set(a) & set(b):
        raise DistributionError(f"axis sets overlap: {sorted(set(a) & set(b))}")
    joint = grouped_mass(table, a, b)
    independent = joint.sum(axis=1, keepdims=True) * joint.sum(axis=0, keepdims=True)
    return ensure_finite(rel_entr(joint, independent).sum() / LN2, "mutual information")


def conditional_mutual_information(table: JointTable, a, b, c=()) -> float:
    """I(a:b|c) = H(ac) + H(bc) - H(abc) - H(c)"""
    a, b, c = _names(a), _names(b), _names(c)
    if not c:
        return mutual_information(table, a, b)
    if set(a) & set(c) or set(b) & set(c):
        raise DistributionError("conditioning axes must be disjoint from both sides")
    value = (entropy(table, a + c) + entropy(table, b + c)
             - entropy(table, a + b + c) - entropy(table, c))
    return ensure_finite(value, "conditional mutual information")


def total_correlation(table: JointTable, axes, conditioned_on=None) -> float:
    """
    Multi-information of the listed axes, optionally given one more axis.

    TC = sum_i H(A_i) - H(A_1..A_k); with conditioning every entropy term
    becomes conditional on that axis.
    """
    axes = _names(axes)
    if len(axes) < 2:
        raise DistributionError(f"total correlation needs at least 2 axes, got {len(axes)}")
    if len(set(axes)) != len(axes):
        raise DistributionError(f"repeated axes in {list(axes)}")
    if conditioned_on is None:
        value = sum(entropy(table, name) for name in axes) - entropy(table, axes)
        return ensure_finite(value, "total correlation")

    if conditioned_on in axes:
        raise DistributionError(f"conditioning axis '{conditioned_on}' is one of the correlated axes")
    given = entropy(table, conditioned_on)
    parts = sum(entropy(table, (name, conditioned_on)) - given for name in axes)
    whole = entropy(table, axes + (conditioned_on,)) - given
    return ensure_finite(parts - whole, "conditional total correlation")


def kl_divergence(p: JointTable, q: JointTable) -> float:
    """D(p || q) over identically structured tables"""
    if p.axes != q.axes or p.target_name != q.target_name:
        raise DistributionError("KL divergence needs tables with identical axes")
    p_mass = np.where(p.mass > ZERO_PROBABILITY, p.mass, 0.0)
    q_mass = np.asarray(q.mass)

    violations = np.argwhere((p_mass > 0) & (q_mass <= ZERO_PROBABILITY))
    if len(violations):
        index = tuple(violations[0])
        state = ", ".join(f"{axis.name}={axis.states[i]}" for axis, i in zip(p.axes, index))
        raise DistributionError(f"q is 0 where p is positive at ({state})")

    return ensure_finite(rel_entr(p_mass, q_mass).sum() / LN2, "KL divergence")


def specific_surprise_profile(table: JointTable, predictor: str) -> np.ndarray:
    """D(Pr(X_i|y) || Pr(X_i)) for every target state; 0 where Pr(y) = 0"""
    table.require_target()
    if predictor not in table.predictor_names:
        raise DistributionError(f"'{predictor}' is not a predictor of {table!r}")
    joint = grouped_mass(table, predictor, table.target_name)
    p_x = joint.sum(axis=1, keepdims=True)
    p_y = joint.sum(axis=0)

    profile = np.zeros(len(p_y))
    for j, py in enumerate(p_y):
        if py > ZERO_PROBABILITY:
            profile[j] = rel_entr(joint[:, j] / py, p_x[:, 0]).sum() / LN2
    return profile


def specific_surprise(table: JointTable, predictor: str, y_state) -> float:
    """Information a single target state carries about one predictor"""
    table.require_target()
    j = table.target_axis.index(y_state)
    p_y = grouped_mass(table, table.target_name)
    if p_y[j] <= ZERO_PROBABILITY:
        raise DistributionError(f"target state '{y_state}' has probability 0")
    return ensure_finite(specific_surprise_profile(table, predictor)[j], "specific surprise")


def product_of_conditionals(table: JointTable) -> JointTable:
    """
    The joint Pr(y) * prod_i Pr(x_i | y) on the same axes.

    Every predictor-target pair keeps its marginal, and the predictors
    become conditionally independent given the target.
    """
    table.require_target()
    n = table.n_predictors
    p_y = grouped_mass(table, table.target_name)
    mass = p_y.reshape((1,) * n + (-1,)).copy()
    safe_y = np.where(p_y > 0, p_y, 1.0)

    for i, name in enumerate(table.predictor_names):
        conditional_x = grouped_mass(table, name, table.target_name) / safe_y
        shape = [1] * (n + 1)
        shape[i] = conditional_x.shape[0]
        shape[n] = conditional_x.shape[1]
        mass = mass * conditional_x.reshape(shape)

    return JointTable(table.predictor_axes, table.target_axis, mass)
