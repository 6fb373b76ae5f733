# joint_table.py
# ============================================================================
# Discrete Joint Distributions - Axes, Tables and Validation
# ============================================================================

import hashlib
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

import numpy as np

from config import NORMALIZATION_TOLERANCE

# Every public information quantity is a plain float measured in bits
ScalarBits = float

Labels = Tuple[str, ...]


class DistributionError(ValueError):
    """Invalid joint distribution, or an invalid request made against one"""


def ensure_finite(value, what="result"):
    """Return value as float, refusing NaN and infinities"""
    value = float(value)
    if not math.isfinite(value):
        raise DistributionError(f"{what} is not finite ({value})")
    return value


@dataclass(frozen=True)
class VariableAxis:
    """A named discrete variable with its ordered state alphabet"""

    name: str
    states: Tuple[str, ...]

    def __post_init__(self):
        states = tuple(str(state) for state in self.states)
        object.__setattr__(self, "states", states)
        if not self.name:
            raise DistributionError("axis name must be non-empty")
        if not states:
            raise DistributionError(f"axis '{self.name}' has no states")
        if len(set(states)) != len(states):
            duplicates = sorted({s for s in states if states.count(s) > 1})
            raise DistributionError(f"axis '{self.name}' repeats states {duplicates}")

    @property
    def size(self):
        return len(self.states)

    def index(self, label):
        try:
            return self.states.index(str(label))
        except ValueError:
            raise DistributionError(f"state '{label}' is not in axis '{self.name}'") from None


class JointTable:
    """
    Immutable dense probability table.

    Axes are the predictors in order followed by the target. Tables built
    from data always carry a target and at least one predictor; marginals
    and conditionals may drop either role.
    """

    def __init__(self, predictor_axes: Sequence[VariableAxis], target_axis: Optional[VariableAxis],
                 mass, *, tolerance=NORMALIZATION_TOLERANCE):
        self._predictors = tuple(predictor_axes)
        self._target = target_axis
        axes = self.axes
        if not axes:
            raise DistributionError("a table needs at least one axis")

        names = [axis.name for axis in axes]
        if len(set(names)) != len(names):
            duplicates = sorted({n for n in names if names.count(n) > 1})
            raise DistributionError(f"axis names must be unique, repeated: {duplicates}")

        mass = np.array(mass, dtype=float)
        shape = tuple(axis.size for axis in axes)
        if mass.shape != shape:
            raise DistributionError(f"mass has shape {mass.shape}, axes need {shape}")
        if not np.all(np.isfinite(mass)):
            raise DistributionError("mass contains non-finite entries")
        if np.any(mass < 0):
            raise DistributionError(f"mass contains negative entries (min {mass.min():.3g})")

        total = math.fsum(mass.ravel())
        if abs(total - 1.0) > tolerance:
            raise DistributionError(f"mass sums to {total:.12g}")

        mass.flags.writeable = False
        self._mass = mass

    # ------------------------------------------------------------------
    # Construction helpers
    # ------------------------------------------------------------------

    @classmethod
    def from_rows(cls, predictor_names: Sequence[str], target_name: Optional[str],
                  rows: Iterable[Tuple[Sequence[str], float]],
                  states: Optional[Mapping[str, Sequence[str]]] = None,
                  tolerance=NORMALIZATION_TOLERANCE):
        """
        Build a table from (labels, probability) rows.

        Labels list the predictor states then the target state. Alphabets
        come from `states` when given, otherwise from first appearance.
        Unlisted cells have mass 0; repeated rows accumulate.
        """
        names = list(predictor_names) + ([target_name] if target_name is not None else [])
        rows = [(tuple(str(label) for label in labels), float(p)) for labels, p in rows]

        alphabets: Dict[str, list] = {}
        for position, name in enumerate(names):
            if states is not None and name in states:
                alphabets[name] = [str(s) for s in states[name]]
                continue
            seen = []
            for labels, _ in rows:
                if len(labels) != len(names):
                    raise DistributionError(
                        f"row {labels} has {len(labels)} labels, expected {len(names)}")
                if labels[position] not in seen:
                    seen.append(labels[position])
            alphabets[name] = seen

        axes = [VariableAxis(name, tuple(alphabets[name])) for name in names]
        mass = np.zeros(tuple(axis.size for axis in axes))
        for labels, p in rows:
            if len(labels) != len(axes):
                raise DistributionError(f"row {labels} has {len(labels)} labels, expected {len(axes)}")
            index = tuple(axis.index(label) for axis, label in zip(axes, labels))
            mass[index] += p

        if target_name is None:
            return cls(axes, None, mass, tolerance=tolerance)
        return cls(axes[:-1], axes[-1], mass, tolerance=tolerance)

    # ------------------------------------------------------------------
    # Structure
    # ------------------------------------------------------------------

    @property
    def predictor_axes(self):
        return self._predictors

    @property
    def target_axis(self):
        return self._target

    @property
    def axes(self):
        return self._predictors + ((self._target,) if self._target is not None else ())

    @property
    def axis_names(self):
        return tuple(axis.name for axis in self.axes)

    @property
    def predictor_names(self):
        return tuple(axis.name for axis in self._predictors)

    @property
    def target_name(self):
        return self._target.name if self._target is not None else None

    @property
    def n_predictors(self):
        return len(self._predictors)

    @property
    def shape(self):
        return self._mass.shape

    @property
    def mass(self):
        """Read-only view of the dense mass array"""
        return self._mass

    def axis(self, name) -> VariableAxis:
        return self.axes[self.axis_position(name)]

    def axis_position(self, name) -> int:
        try:
            return self.axis_names.index(name)
        except ValueError:
            raise DistributionError(f"unknown axis '{name}' (table has {list(self.axis_names)})") from None

    def positions(self, names: Iterable[str]):
        """Sorted axis positions for a collection of names"""
        return sorted({self.axis_position(name) for name in names})

    def require_target(self, min_predictors=1):
        """Raise unless the table has a target and enough predictors"""
        if self._target is None:
            raise DistributionError("table has no target axis")
        if self.n_predictors < min_predictors:
            raise DistributionError(
                f"need at least {min_predictors} predictor(s), table has {self.n_predictors}")

    # ------------------------------------------------------------------
    # Rows and comparisons
    # ------------------------------------------------------------------

    def rows(self) -> Iterator[Tuple[Labels, float]]:
        """Positive-mass cells in mixed-radix order"""
        for index in zip(*np.nonzero(self._mass)):
            labels = tuple(axis.states[i] for axis, i in zip(self.axes, index))
            yield labels, float(self._mass[index])

    def probability(self, labels: Sequence[str]) -> float:
        if len(labels) != len(self.axes):
            raise DistributionError(f"expected {len(self.axes)} labels, got {len(labels)}")
        index = tuple(axis.index(label) for axis, label in zip(self.axes, labels))
        return float(self._mass[index])

    def with_predictor_order(self, names: Sequence[str]) -> "JointTable":
        """Same distribution with the predictor axes reordered"""
        if sorted(names) != sorted(self.predictor_names):
            raise DistributionError(f"{list(names)} is not a reordering of {list(self.predictor_names)}")
        order = [self.predictor_names.index(name) for name in names]
        if self._target is not None:
            order.append(len(order))
        predictors = [self._predictors[i] for i in order[:len(names)]]
        return JointTable(predictors, self._target, np.transpose(self._mass, order))

    def _row_map(self):
        return dict(self.rows())

    def __eq__(self, other):
        # Named roles plus the positive cells with their masses
        if not isinstance(other, JointTable):
            return NotImplemented
        return (self.predictor_names == other.predictor_names
                and self.target_name == other.target_name
                and self._row_map() == other._row_map())

    __hash__ = None

    def equivalent(self, other: "JointTable") -> bool:
        """Positional comparison that ignores axis names"""
        return (self.n_predictors == other.n_predictors
                and (self._target is None) == (other._target is None)
                and self._row_map() == other._row_map())

    def allclose(self, other: "JointTable", atol=1e-12) -> bool:
        if self.axis_names != other.axis_names:
            return False
        mine, theirs = self._row_map(), other._row_map()
        return all(abs(mine.get(key, 0.0) - theirs.get(key, 0.0)) <= atol
                   for key in set(mine) | set(theirs))

    def content_hash(self) -> str:
        digest = hashlib.sha256()
        for axis in self.axes:
            digest.update(axis.name.encode("utf-8") + b"\x1f")
            digest.update("\x1e".join(axis.states).encode("utf-8") + b"\x1d")
        digest.update(b"target" if self._target is not None else b"none")
        digest.update(np.ascontiguousarray(self._mass, dtype="<f8").tobytes())
        return digest.hexdigest()

    def __repr__(self):
        axes = ", ".join(f"{axis.name}[{axis.size}]" for axis in self.axes)
        return f"JointTable({axes}, target={self.target_name!r})"
