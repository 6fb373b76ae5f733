# conftest.py
# ============================================================================
# Shared fixtures and random-table helpers
# ============================================================================

from pathlib import Path

import numpy as np
import pytest

from config import CIRCUITS_DIR
from joint_table import JointTable, VariableAxis

CIRCUITS = Path(__file__).resolve().parent.parent / CIRCUITS_DIR


def random_table(rng, n_predictors, max_states=3, sparsity=0.0, min_states=2):
    """Random joint over X1..Xn and Y; sparsity zeroes a fraction of cells"""
    sizes = [int(rng.integers(min_states, max_states + 1)) for _ in range(n_predictors + 1)]
    mass = rng.dirichlet(np.ones(int(np.prod(sizes))))
    if sparsity > 0:
        mass[rng.random(mass.size) < sparsity] = 0.0
        if mass.sum() == 0:
            mass[0] = 1.0
        mass /= mass.sum()
    axes = [VariableAxis(f"X{i + 1}", tuple(str(s) for s in range(k))) for i, k in enumerate(sizes[:-1])]
    target = VariableAxis("Y", tuple(str(s) for s in range(sizes[-1])))
    return JointTable(axes, target, mass.reshape(sizes))


@pytest.fixture
def circuits_dir():
    return CIRCUITS
