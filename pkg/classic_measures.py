# classic_measures.py
# ============================================================================
# Classic Synergy Measures - S_max, WholeMinusSum, Correlational Importance
# ============================================================================

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from info_theory import (
    LN2,
    grouped_mass,
    kl_divergence,
    marginal,
    mutual_information,
    product_of_conditionals,
    specific_surprise_profile,
    total_correlation,
)
from joint_table import JointTable, ensure_finite

CROSS_CHECK_TOLERANCE = 1e-9


class CrossCheckError(ArithmeticError):
    """Two independent evaluations of the same measure disagree"""


@dataclass(frozen=True)
class ClassicReport:
    i_whole: float
    i_singletons: Tuple[float, ...]
    i_max: float
    s_max: float
    wms: float
    delta_i: float


def _cross_check(name, first, second):
    if abs(first - second) > CROSS_CHECK_TOLERANCE:
        raise CrossCheckError(f"{name}: forms disagree ({first:.12g} vs {second:.12g})")


def whole_information(table: JointTable) -> float:
    """I(X_1..X_n : Y)"""
    table.require_target()
    return mutual_information(table, table.predictor_names, table.target_name)


def singleton_information(table: JointTable) -> Tuple[float, ...]:
    table.require_target()
    return tuple(mutual_information(table, name, table.target_name)
                 for name in table.predictor_names)


def i_max(table: JointTable) -> float:
    """Expected over y of the largest single-predictor specific surprise"""
    table.require_target()
    p_y = grouped_mass(table, table.target_name)
    profiles = np.array([specific_surprise_profile(table, name) for name in table.predictor_names])
    return ensure_finite(math.fsum(p_y * profiles.max(axis=0)), "I_max")


def s_max(table: JointTable) -> float:
    table.require_target(min_predictors=2)
    return ensure_finite(whole_information(table) - i_max(table), "S_max")


def wms_total_correlation_form(table: JointTable) -> float:
    """TC(X_1;..;X_n | Y) - TC(X_1;..;X_n)"""
    table.require_target(min_predictors=2)
    names = table.predictor_names
    return ensure_finite(total_correlation(table, names, conditioned_on=table.target_name)
                         - total_correlation(table, names), "WMS")


def wms(table: JointTable) -> float:
    """Whole minus the sum of singleton informations; negative means redundancy"""
    table.require_target(min_predictors=2)
    value = whole_information(table) - math.fsum(singleton_information(table))
    _cross_check("WMS", value, wms_total_correlation_form(table))
    return ensure_finite(value, "WMS")


def delta_i_direct_form(table: JointTable) -> float:
    """
    Expected KL between the true posterior Pr(y|x) and the posterior
    obtained when predictors are independent given the target.
    """
    table.require_target(min_predictors=2)
    predictors, target = table.predictor_names, table.target_name
    joint = grouped_mass(table, predictors, target)
    independent = grouped_mass(product_of_conditionals(table), predictors, target)

    terms = []
    for p_xy, q_xy in zip(joint, independent):
        p_x = math.fsum(p_xy)
        if p_x <= 0:
            continue
        q_x = math.fsum(q_xy)
        positive = p_xy > 0
        terms.extend(p_xy[positive] * np.log((p_xy[positive] / p_x) / (q_xy[positive] / q_x)))
    return ensure_finite(math.fsum(terms) / LN2, "delta I")


def delta_i_simplified_form(table: JointTable) -> float:
    """TC(X_1;..;X_n | Y) - D(Pr(X) || Pr_ind(X))"""
    table.require_target(min_predictors=2)
    predictors = table.predictor_names
    conditional_tc = total_correlation(table, predictors, conditioned_on=table.target_name)
    divergence = kl_divergence(marginal(table, predictors),
                               marginal(product_of_conditionals(table), predictors))
    return ensure_finite(conditional_tc - divergence, "delta I")


def delta_i(table: JointTable) -> float:
    value = delta_i_direct_form(table)
    _cross_check("delta I", value, delta_i_simplified_form(table))
    return value


def classic_report(table: JointTable) -> ClassicReport:
    table.require_target(min_predictors=2)
    whole = whole_information(table)
    maximum = i_max(table)
    return ClassicReport(
        i_whole=whole,
        i_singletons=singleton_information(table),
        i_max=maximum,
        s_max=ensure_finite(whole - maximum, "S_max"),
        wms=wms(table),
        delta_i=delta_i(table),
    )
