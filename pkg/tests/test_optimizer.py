# test_optimizer.py
# ============================================================================
# Tests for projection, raking and the constrained descent
# ============================================================================

import numpy as np
import pytest

from conftest import random_table
from examples_corpus import ExampleId, build_example
from joint_table import JointTable
from optimizer import (
    ConstraintSystem,
    OptimizerConfig,
    OptimizerError,
    Oracle,
    ProjectionError,
    minimize,
    project_feasible,
    rake,
)
from union_info import UnionProblem


def _quadratic(center):
    center = np.asarray(center, dtype=float)
    return Oracle(value=lambda x: float(np.sum((x - center) ** 2)), gradient=lambda x: 2.0 * (x - center))


class TestConfig:
    def test_defaults(self):
        cfg = OptimizerConfig()
        assert (cfg.restarts, cfg.max_iterations, cfg.tolerance_bits, cfg.seed) == (16, 5000, 1e-10, 0)

    @pytest.mark.parametrize("field, value", [
        ("restarts", -1),
        ("max_iterations", 0),
        ("tolerance_bits", 0.0),
        ("tolerance_bits", 1e-3),
        ("feasibility_tolerance", 0.0),
        ("seed", -5),
        ("workers", 0),
    ])
    def test_rejects_bad_values(self, field, value):
        with pytest.raises(ValueError, match=field):
            OptimizerConfig(**{field: value})


class TestConstraintSystem:
    def test_redundant_rows_are_dropped(self):
        problem = UnionProblem(build_example(ExampleId.AND))
        cs = problem.constraints
        assert cs.matrix.shape[0] == 6
        # both groups sum to the total mass and share the (x_i=1, y=1) row
        assert cs.rank == 4
        assert cs.residual(problem.restrict(build_example(ExampleId.AND).mass)) < 1e-15

    def test_group_must_sum_to_one(self):
        with pytest.raises(OptimizerError, match="sums to"):
            ConstraintSystem(np.eye(2), [0.5, 0.4])

    def test_rhs_must_be_probabilities(self):
        with pytest.raises(OptimizerError, match="probabilities"):
            ConstraintSystem(np.eye(2), [1.5, -0.5], groups=[[0, 1]])

    def test_equalities_listing(self):
        cs = ConstraintSystem([[1, 1, 0], [0, 0, 1]], [0.7, 0.3])
        assert cs.equalities == [((0, 1), 0.7), ((2,), 0.3)]


class TestProjection:
    def test_feasible_point_is_returned_unchanged(self):
        cs = ConstraintSystem.simplex(3)
        point = np.array([0.2, 0.3, 0.5])
        assert np.array_equal(project_feasible(point, cs), point)

    def test_projection_is_idempotent(self):
        cs = ConstraintSystem.simplex(4)
        once = project_feasible([0.9, -0.3, 0.6, 0.1], cs)
        twice = project_feasible(once, cs)
        assert np.all(once >= 0)
        assert cs.residual(once) <= 1e-10
        assert np.array_equal(once, twice)

    @pytest.mark.parametrize("example_id", [ExampleId.RDN, ExampleId.AND], ids=str)
    def test_source_table_is_feasible(self, example_id):
        table = build_example(example_id)
        problem = UnionProblem(table)
        point = problem.restrict(table.mass)
        assert np.allclose(project_feasible(point, problem.constraints), point, atol=1e-12)

    def test_rdn_projects_onto_its_only_point(self):
        problem = UnionProblem(build_example(ExampleId.RDN))
        projected = project_feasible(np.full(problem.dimension, 0.3), problem.constraints)
        np.testing.assert_allclose(projected, [0.5, 0.5], atol=1e-12)

    def test_infeasible_system_raises(self):
        # x0 + x1 = 1 together with -x0 = 1 has no nonnegative solution
        cs = ConstraintSystem([[1, 1, 0], [-1, 0, 0]], [1.0, 1.0], groups=[[0], [1]])
        with pytest.raises(ProjectionError) as excinfo:
            project_feasible([0.3, 0.3, 0.4], cs)
        assert excinfo.value.residual > 0
        assert "residual" in str(excinfo.value)

    def test_rake_matches_marginals(self):
        table = build_example(ExampleId.AND)
        problem = UnionProblem(table)
        raked, sweeps = rake(np.random.default_rng(0).random(problem.dimension), problem.constraints)
        assert sweeps >= 1
        assert problem.constraints.residual(raked) < 1e-10


class TestMinimize:
    def test_interior_minimum_on_simplex(self):
        cs = ConstraintSystem.simplex(3)
        result = minimize(_quadratic([0.6, 0.4, 0.3]), cs, [np.full(3, 1 / 3)], OptimizerConfig())
        np.testing.assert_allclose(result.point, [0.5, 0.3, 0.2], atol=1e-9)
        assert result.converged

    def test_boundary_minimum_on_simplex(self):
        cs = ConstraintSystem.simplex(3)
        result = minimize(_quadratic([1.0, 0.2, -0.5]), cs, [np.full(3, 1 / 3)], OptimizerConfig())
        np.testing.assert_allclose(result.point, [0.9, 0.1, 0.0], atol=1e-9)
        assert result.point[2] == 0.0

    def test_trace_never_increases(self):
        table = build_example(ExampleId.AND)
        problem = UnionProblem(table)
        cfg = OptimizerConfig(restarts=3)
        result = minimize(problem.oracle, problem.constraints, problem.starts(cfg), cfg)
        for run in result.runs:
            assert all(later <= earlier + 1e-15 for earlier, later in zip(run.trace, run.trace[1:]))

    def test_best_run_wins_and_ties_go_to_earliest(self):
        cs = ConstraintSystem.simplex(2)
        oracle = Oracle(value=lambda x: 0.0, gradient=lambda x: np.zeros_like(x))
        result = minimize(oracle, cs, [[0.5, 0.5], [0.2, 0.8]], OptimizerConfig())
        assert result.start_index == 0
        assert len(result.runs) == 2

    def test_deterministic(self):
        problem = UnionProblem(build_example(ExampleId.AND_DUPLICATE))
        cfg = OptimizerConfig(restarts=4, seed=3)
        first = minimize(problem.oracle, problem.constraints, problem.starts(cfg), cfg)
        second = minimize(problem.oracle, problem.constraints, problem.starts(cfg), cfg)
        assert first.value == second.value
        assert first.trace == second.trace
        assert np.array_equal(first.point, second.point)

    def test_threaded_runs_match_serial(self):
        problem = UnionProblem(build_example(ExampleId.AND))
        serial = OptimizerConfig(restarts=4)
        threaded = OptimizerConfig(restarts=4, workers=3)
        a = minimize(problem.oracle, problem.constraints, problem.starts(serial), serial)
        b = minimize(problem.oracle, problem.constraints, problem.starts(threaded), threaded)
        assert a.value == b.value
        assert a.start_index == b.start_index

    def test_iteration_cap_reports_not_converged(self):
        problem = UnionProblem(build_example(ExampleId.AND))
        cfg = OptimizerConfig(restarts=0, max_iterations=1)
        result = minimize(problem.oracle, problem.constraints, problem.starts(cfg)[:1], cfg)
        assert not result.converged
        assert problem.constraints.residual(result.point) <= cfg.feasibility_tolerance

    def test_no_starts(self):
        with pytest.raises(OptimizerError, match="at least one start"):
            minimize(_quadratic([0.5, 0.5]), ConstraintSystem.simplex(2), [], OptimizerConfig())

    def test_non_finite_objective(self):
        oracle = Oracle(value=lambda x: float("nan"), gradient=lambda x: np.zeros_like(x))
        with pytest.raises(OptimizerError, match="not finite"):
            minimize(oracle, ConstraintSystem.simplex(2), [[0.5, 0.5]], OptimizerConfig())


def test_gradient_matches_central_differences():
    rng = np.random.default_rng(5)
    h = 1e-6
    for _ in range(50):
        table = random_table(rng, 2, max_states=3)
        # keep every cell well inside the simplex
        mass = 0.5 * table.mass + 0.5 / table.mass.size
        problem = UnionProblem(JointTable(table.predictor_axes, table.target_axis, mass))
        x = problem.restrict(mass)
        analytic = problem.gradient(x)
        numeric = np.empty_like(x)
        for k in range(len(x)):
            step = np.zeros_like(x)
            step[k] = h
            numeric[k] = (problem.value(x + step) - problem.value(x - step)) / (2 * h)
        assert np.linalg.norm(analytic - numeric) <= 1e-4 * np.linalg.norm(analytic)
