# circuit_dsl.py
# ============================================================================
# Circuit Description Language - parse .circ text and compile to JointTable
# ============================================================================
#
#   source a uniform(2)                     # states "0", "1"
#   source r uniform(2) labels(r, R)
#   source w dist(3/4, 1/4)
#   X1 := CONCAT(r, a)
#   Y  := XOR(a, AND(b, c))
#   predictors: X1 X2
#   target: Y
#
# A wire's bit value is the index of its state, so only two-state wires may
# feed XOR, AND, OR and NOT. Gate outputs have states "0" and "1".

import itertools
import math
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from config import MAX_CIRCUIT_STATES, NORMALIZATION_TOLERANCE
from joint_table import JointTable


class CircuitError(ValueError):
    """Located syntax or semantic error, rendered as line:col: message"""

    def __init__(self, message, line=0, col=0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


class GateOp(str, Enum):
    XOR = "XOR"
    AND = "AND"
    OR = "OR"
    NOT = "NOT"
    COPY = "COPY"
    CONCAT = "CONCAT"


# (minimum, maximum) argument count; None means unbounded
ARITY = {
    GateOp.XOR: (2, None),
    GateOp.AND: (2, None),
    GateOp.OR: (2, None),
    GateOp.NOT: (1, 1),
    GateOp.COPY: (1, 1),
    GateOp.CONCAT: (1, None),
}
BINARY_OPS = {GateOp.XOR, GateOp.AND, GateOp.OR, GateOp.NOT}
BIT_STATES = ("0", "1")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class Source:
    name: str
    states: Tuple[str, ...]
    probabilities: Tuple[float, ...]
    line: int


@dataclass(frozen=True)
class WireRef:
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class Gate:
    op: GateOp
    args: Tuple["Expression", ...]
    line: int
    col: int


Expression = Union[WireRef, Gate]


@dataclass(frozen=True)
class Definition:
    name: str
    expression: Expression
    line: int


@dataclass(frozen=True)
class CircuitSpec:
    sources: Tuple[Source, ...]
    definitions: Tuple[Definition, ...]
    predictors: Tuple[str, ...]
    target: str

    def alphabets(self) -> Dict[str, Tuple[str, ...]]:
        """Static state alphabet of every wire, in declaration order"""
        alphabets = {source.name: source.states for source in self.sources}
        for definition in self.definitions:
            alphabets[definition.name] = expression_states(definition.expression, alphabets)
        return alphabets

    def state_space_size(self):
        return math.prod(len(source.states) for source in self.sources)


def expression_states(expression: Expression, alphabets) -> Tuple[str, ...]:
    """Static alphabet of an expression; alphabets holds every named wire's"""
    if isinstance(expression, WireRef):
        return alphabets[expression.name]
    if expression.op in BINARY_OPS:
        return BIT_STATES
    if expression.op == GateOp.COPY:
        return expression_states(expression.args[0], alphabets)
    parts = [expression_states(arg, alphabets) for arg in expression.args]
    if math.prod(len(part) for part in parts) > MAX_CIRCUIT_STATES:
        raise CircuitError(f"CONCAT alphabet exceeds {MAX_CIRCUIT_STATES} states",
                           expression.line, expression.col)
    return tuple(dict.fromkeys("".join(labels) for labels in itertools.product(*parts)))


# ----------------------------------------------------------------------------
# Tokenizer
# ----------------------------------------------------------------------------

TOKEN_PATTERN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#.*)
  | (?P<assign>:=)
  | (?P<colon>:)
  | (?P<number>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
  | (?P<slash>/)
""", re.VERBOSE)


def tokenize_line(text, line_number) -> List[Token]:
    tokens = []
    position = 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        if match is None:
            raise CircuitError(f"unexpected character '{text[position]}'", line_number, position + 1)
        kind = match.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, match.group(), line_number, position + 1))
        position = match.end()
    return tokens


def tokenize(text) -> List[List[Token]]:
    """Tokens grouped per non-empty line"""
    return [tokens for number, line in enumerate(text.splitlines(), start=1)
            if (tokens := tokenize_line(line, number))]


# ----------------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------------

class _LineParser:
    """Cursor over the tokens of one line"""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.position = 0

    def peek(self) -> Optional[Token]:
        return self.tokens[self.position] if self.position < len(self.tokens) else None

    def _end_location(self):
        last = self.tokens[-1]
        return last.line, last.col + len(last.text)

    def expect(self, kind, what=None) -> Token:
        token = self.peek()
        what = what or kind
        if token is None:
            raise CircuitError(f"expected {what}, found end of line", *self._end_location())
        if token.kind != kind:
            raise CircuitError(f"expected {what}, found '{token.text}'", token.line, token.col)
        self.position += 1
        return token

    def accept(self, kind) -> Optional[Token]:
        token = self.peek()
        if token is not None and token.kind == kind:
            self.position += 1
            return token
        return None

    def finish(self):
        token = self.peek()
        if token is not None:
            raise CircuitError(f"unexpected '{token.text}'", token.line, token.col)

    def number(self) -> Tuple[float, Token]:
        """A decimal number or a fraction a/b"""
        token = self.expect("number", "a number")
        value = float(token.text)
        if self.accept("slash"):
            denominator = self.expect("number", "a denominator")
            if float(denominator.text) == 0:
                raise CircuitError("division by zero", denominator.line, denominator.col)
            value /= float(denominator.text)
        return value, token

    def label(self) -> Token:
        token = self.peek()
        if token is None or token.kind not in ("name", "number"):
            return self.expect("name", "a state label")
        self.position += 1
        return token

    def bracketed(self, item):
        """( item {, item} )"""
        self.expect("lparen", "'('")
        items = [item()]
        while self.accept("comma"):
            items.append(item())
        self.expect("rparen", "')'")
        return items

    def expression(self) -> Expression:
        name = self.expect("name", "a wire name or gate")
        if self.peek() is None or self.peek().kind != "lparen":
            return WireRef(name.text, name.line, name.col)
        try:
            op = GateOp(name.text)
        except ValueError:
            raise CircuitError(f"unknown operation '{name.text}'", name.line, name.col) from None
        args = tuple(self.bracketed(self.expression))
        low, high = ARITY[op]
        if len(args) < low or (high is not None and len(args) > high):
            expected = str(low) if low == high else f"at least {low}"
            raise CircuitError(f"{op.value} takes {expected} argument(s), got {len(args)}", name.line, name.col)
        return Gate(op, args, name.line, name.col)


def _parse_source(parser: _LineParser, keyword: Token) -> Tuple[Source, Token]:
    name = parser.expect("name", "a source name")
    kind = parser.expect("name", "'uniform' or 'dist'")

    if kind.text == "uniform":
        parser.expect("lparen", "'('")
        size, size_token = parser.number()
        parser.expect("rparen", "')'")
        if not math.isfinite(size) or size != int(size) or not 1 <= size <= MAX_CIRCUIT_STATES:
            raise CircuitError(f"uniform needs a positive integer, got {size_token.text}",
                               size_token.line, size_token.col)
        probabilities = (1.0 / int(size),) * int(size)
    elif kind.text == "dist":
        values = parser.bracketed(parser.number)
        probabilities = tuple(value for value, _ in values)
        for value, token in values:
            if value < 0:
                raise CircuitError(f"negative probability {token.text}", token.line, token.col)
        total = math.fsum(probabilities)
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise CircuitError(f"dist sums to {total:.12g}, expected 1", kind.line, kind.col)
        probabilities = tuple(p / total for p in probabilities)
    else:
        raise CircuitError(f"expected 'uniform' or 'dist', found '{kind.text}'", kind.line, kind.col)

    states = tuple(str(i) for i in range(len(probabilities)))
    labels_keyword = parser.accept("name")
    if labels_keyword is not None:
        if labels_keyword.text != "labels":
            raise CircuitError(f"expected 'labels', found '{labels_keyword.text}'",
                               labels_keyword.line, labels_keyword.col)
        label_tokens = parser.bracketed(parser.label)
        states = tuple(token.text for token in label_tokens)
        if len(states) != len(probabilities):
            raise CircuitError(f"source '{name.text}' has {len(probabilities)} states but "
                               f"{len(states)} labels", labels_keyword.line, labels_keyword.col)
        if len(set(states)) != len(states):
            raise CircuitError(f"source '{name.text}' repeats a label", labels_keyword.line, labels_keyword.col)
    parser.finish()
    return Source(name.text, states, probabilities, keyword.line), name


def _name_list(parser: _LineParser) -> List[Token]:
    names = [parser.expect("name", "a wire name")]
    while parser.peek() is not None:
        parser.accept("comma")
        names.append(parser.expect("name", "a wire name"))
    return names


def _check_references(expression: Expression, defining: str, known, declared_later, alphabets):
    """Every reference resolves to an earlier wire; gate inputs have the right width"""
    if isinstance(expression, WireRef):
        if expression.name == defining:
            raise CircuitError(f"circular reference: '{defining}' refers to itself",
                               expression.line, expression.col)
        if expression.name not in known:
            problem = "forward reference to" if expression.name in declared_later else "unknown name"
            raise CircuitError(f"{problem} '{expression.name}'", expression.line, expression.col)
        return
    for arg in expression.args:
        _check_references(arg, defining, known, declared_later, alphabets)
        if expression.op in BINARY_OPS:
            width = len(expression_states(arg, alphabets))
            if width != 2:
                shown = arg.name if isinstance(arg, WireRef) else arg.op.value
                raise CircuitError(f"non-binary input '{shown}' ({width} states) to {expression.op.value}",
                                   arg.line, arg.col)


def parse_circuit(text: str) -> CircuitSpec:
    """Parse and validate circuit text"""
    lines = tokenize(text)
    last_line = max(len(text.splitlines()), 1)

    sources: List[Source] = []
    definitions: List[Definition] = []
    name_tokens: Dict[str, Token] = {}
    predictors: Optional[List[Token]] = None
    target: Optional[Token] = None

    def declare(token: Token):
        if token.text in name_tokens:
            first = name_tokens[token.text]
            raise CircuitError(f"duplicate definition of '{token.text}' (first at line {first.line})",
                               token.line, token.col)
        name_tokens[token.text] = token

    for tokens in lines:
        parser = _LineParser(tokens)
        first = tokens[0]
        second = tokens[1] if len(tokens) > 1 else None

        if second is not None and second.kind == "assign":
            parser.expect("name", "a wire name")
            parser.expect("assign")
            expression = parser.expression()
            parser.finish()
            declare(first)
            definitions.append(Definition(first.text, expression, first.line))
        elif first.kind == "name" and first.text == "source":
            parser.expect("name")
            source, name = _parse_source(parser, first)
            declare(name)
            sources.append(source)
        elif first.kind == "name" and first.text == "predictors":
            parser.expect("name")
            parser.expect("colon", "':'")
            if predictors is not None:
                raise CircuitError("duplicate 'predictors:' line", first.line, first.col)
            predictors = _name_list(parser)
        elif first.kind == "name" and first.text == "target":
            parser.expect("name")
            parser.expect("colon", "':'")
            if target is not None:
                raise CircuitError("duplicate 'target:' line", first.line, first.col)
            target = parser.expect("name", "a wire name")
            parser.finish()
        else:
            raise CircuitError(f"unexpected '{first.text}' at start of line", first.line, first.col)

    # Definitions must only look backwards
    alphabets = {source.name: source.states for source in sources}
    all_names = set(name_tokens)
    for definition in definitions:
        _check_references(definition.expression, definition.name, alphabets, all_names, alphabets)
        alphabets[definition.name] = expression_states(definition.expression, alphabets)

    if predictors is None:
        raise CircuitError("missing 'predictors:' line", last_line, 1)
    if target is None:
        raise CircuitError("missing 'target:' line", last_line, 1)
    seen = set()
    for token in predictors + [target]:
        if token.text not in alphabets:
            raise CircuitError(f"unknown name '{token.text}'", token.line, token.col)
    for token in predictors:
        if token.text in seen:
            raise CircuitError(f"predictor '{token.text}' listed twice", token.line, token.col)
        seen.add(token.text)
    if target.text in seen:
        raise CircuitError(f"target '{target.text}' is also a predictor", target.line, target.col)

    return CircuitSpec(tuple(sources), tuple(definitions),
                       tuple(token.text for token in predictors), target.text)


# ----------------------------------------------------------------------------
# Compiler
# ----------------------------------------------------------------------------

def _bit_tables(spec: CircuitSpec, alphabets) -> Dict[int, Dict[str, int]]:
    """Label-to-bit lookup for every input of a binary gate, keyed by id()"""
    tables = {}
    pending = [definition.expression for definition in spec.definitions]
    while pending:
        expression = pending.pop()
        if isinstance(expression, WireRef):
            continue
        for arg in expression.args:
            if expression.op in BINARY_OPS:
                tables[id(arg)] = {label: bit for bit, label in enumerate(expression_states(arg, alphabets))}
            pending.append(arg)
    return tables


def _evaluate(expression: Expression, values, bit_tables) -> str:
    if isinstance(expression, WireRef):
        return values[expression.name]
    labels = [_evaluate(arg, values, bit_tables) for arg in expression.args]
    if expression.op == GateOp.COPY:
        return labels[0]
    if expression.op == GateOp.CONCAT:
        return "".join(labels)

    bits = [bit_tables[id(arg)][label] for arg, label in zip(expression.args, labels)]
    if expression.op == GateOp.XOR:
        return BIT_STATES[sum(bits) % 2]
    if expression.op == GateOp.AND:
        return BIT_STATES[int(all(bits))]
    if expression.op == GateOp.OR:
        return BIT_STATES[int(any(bits))]
    return BIT_STATES[1 - bits[0]]


def compile_circuit(spec: CircuitSpec) -> JointTable:
    """Enumerate every source assignment and collect (predictors, target) mass"""
    size = 1
    for source in spec.sources:
        size *= len(source.states)
        if size > MAX_CIRCUIT_STATES:
            raise CircuitError(f"source state space exceeds {MAX_CIRCUIT_STATES} assignments", source.line, 1)

    alphabets = spec.alphabets()
    bit_tables = _bit_tables(spec, alphabets)
    outputs = list(spec.predictors) + [spec.target]
    cells: Dict[Tuple[str, ...], float] = {}

    choices = [list(zip(source.states, source.probabilities)) for source in spec.sources]
    for assignment in itertools.product(*choices):
        probability = math.prod(p for _, p in assignment)
        if probability == 0:
            continue
        values = {source.name: label for source, (label, _) in zip(spec.sources, assignment)}
        for definition in spec.definitions:
            values[definition.name] = _evaluate(definition.expression, values, bit_tables)
        key = tuple(values[name] for name in outputs)
        cells[key] = cells.get(key, 0.0) + probability

    reached = {name: {key[i] for key in cells} for i, name in enumerate(outputs)}
    states = {name: [s for s in alphabets[name] if s in reached[name]] for name in outputs}
    return JointTable.from_rows(spec.predictors, spec.target, cells.items(), states=states)


def load_circuit(path) -> JointTable:
    return compile_circuit(parse_circuit(Path(path).read_text(encoding="utf-8")))
