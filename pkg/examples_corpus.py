# examples_corpus.py
# ============================================================================
# Canonical Example Distributions (gate logic + transcribed rows)
# ============================================================================

import itertools
from enum import Enum
from functools import lru_cache

from joint_table import DistributionError, JointTable

BITS = ("0", "1")


class ExampleId(str, Enum):
    RDN = "Rdn"
    UNQ = "Unq"
    XOR = "Xor"
    XOR_DUPLICATE = "XorDuplicate"
    XOR_LOSES = "XorLoses"
    RDN_XOR = "RdnXor"
    AND = "And"
    RDN_UNQ_XOR = "RdnUnqXor"
    AND_DUPLICATE = "AndDuplicate"
    XOR_MULTI_COAL = "XorMultiCoal"

    def __str__(self):
        return self.value


DESCRIPTIONS = {
    ExampleId.RDN: "one bit copied to both predictors and the target (pure redundancy)",
    ExampleId.UNQ: "each predictor carries its own bit of a two-bit target (pure unique)",
    ExampleId.XOR: "target is the XOR of two independent bits (pure synergy)",
    ExampleId.XOR_DUPLICATE: "Xor with X1 duplicated as X3",
    ExampleId.XOR_LOSES: "Xor plus a third predictor that equals the target",
    ExampleId.RDN_XOR: "shared letter plus XOR of private digits (one bit redundant, one synergistic)",
    ExampleId.AND: "target is the AND of two independent bits",
    ExampleId.RDN_UNQ_XOR: "one bit each of redundancy, two unique bits and synergy",
    ExampleId.AND_DUPLICATE: "And with X1 duplicated as X3",
    ExampleId.XOR_MULTI_COAL: "target is the parity of three wires; each predictor sees two",
}


def parse_example_id(text) -> ExampleId:
    """Case-insensitive lookup by name"""
    if isinstance(text, ExampleId):
        return text
    for example_id in ExampleId:
        if example_id.value.lower() == str(text).strip().lower():
            return example_id
    known = ", ".join(e.value for e in ExampleId)
    raise DistributionError(f"unknown example '{text}' (known: {known})")


def _xor(*bits):
    return str(sum(int(b) for b in bits) % 2)


def _and(*bits):
    return str(int(all(b == "1" for b in bits)))


def _uniform(predictor_names, rows):
    rows = list(rows)
    return JointTable.from_rows(predictor_names, "Y", [(row, 1.0 / len(rows)) for row in rows])


def _two_bit_gate(gate):
    return [(x1, x2, gate(x1, x2)) for x1, x2 in itertools.product(BITS, repeat=2)]


def _gate_rdn():
    return _uniform(["X1", "X2"], [(r, r, r) for r in "rR"])


def _gate_unq():
    return _uniform(["X1", "X2"], [(a, b, a + b) for a, b in itertools.product("aA", "bB")])


def _gate_xor():
    return _uniform(["X1", "X2"], _two_bit_gate(_xor))


def _gate_xor_duplicate():
    return _uniform(["X1", "X2", "X3"], [(x1, x2, x1, y) for x1, x2, y in _two_bit_gate(_xor)])


def _gate_xor_loses():
    return _uniform(["X1", "X2", "X3"], [(x1, x2, y, y) for x1, x2, y in _two_bit_gate(_xor)])


def _gate_rdn_xor():
    return _uniform(["X1", "X2"], [
        (r + u, r + v, r + _xor(u, v))
        for r, u, v in itertools.product("rR", BITS, BITS)
    ])


def _gate_and():
    return _uniform(["X1", "X2"], _two_bit_gate(_and))


def _gate_rdn_unq_xor():
    return _uniform(["X1", "X2"], [
        (r + a + u, r + b + v, r + a + b + _xor(u, v))
        for r, a, b, u, v in itertools.product("rR", "aA", "bB", BITS, BITS)
    ])


def _gate_and_duplicate():
    return _uniform(["X1", "X2", "X3"], [(x1, x2, x1, y) for x1, x2, y in _two_bit_gate(_and)])


def _gate_xor_multi_coal():
    rows = []
    for a, b, c in itertools.product("aA", "bB", "cC"):
        parity = _xor(*(str(int(wire.isupper())) for wire in (a, b, c)))
        rows.append((a + b, a + c, b + c, parity))
    return _uniform(["X1", "X2", "X3"], rows)


_BUILDERS = {
    ExampleId.RDN: _gate_rdn,
    ExampleId.UNQ: _gate_unq,
    ExampleId.XOR: _gate_xor,
    ExampleId.XOR_DUPLICATE: _gate_xor_duplicate,
    ExampleId.XOR_LOSES: _gate_xor_loses,
    ExampleId.RDN_XOR: _gate_rdn_xor,
    ExampleId.AND: _gate_and,
    ExampleId.RDN_UNQ_XOR: _gate_rdn_unq_xor,
    ExampleId.AND_DUPLICATE: _gate_and_duplicate,
    ExampleId.XOR_MULTI_COAL: _gate_xor_multi_coal,
}


@lru_cache(maxsize=None)
def _build(example_id: ExampleId) -> JointTable:
    return _BUILDERS[example_id]()


def build_example(example_id) -> JointTable:
    """The example's joint table, built from its gate logic"""
    return _build(parse_example_id(example_id))


# ----------------------------------------------------------------------------
# Rows as printed: predictor states then target state, one row per line
# ----------------------------------------------------------------------------

TRANSCRIBED_ROWS = {
    ExampleId.RDN: """
        r r  r
        R R  R
    """,
    ExampleId.UNQ: """
        a b  ab
        a B  aB
        A b  Ab
        A B  AB
    """,
    ExampleId.XOR: """
        0 0  0
        0 1  1
        1 0  1
        1 1  0
    """,
    ExampleId.XOR_DUPLICATE: """
        0 0 0  0
        0 1 0  1
        1 0 1  1
        1 1 1  0
    """,
    ExampleId.XOR_LOSES: """
        0 0 0  0
        0 1 1  1
        1 0 1  1
        1 1 0  0
    """,
    ExampleId.RDN_XOR: """
        r0 r0  r0
        r0 r1  r1
        r1 r0  r1
        r1 r1  r0
        R0 R0  R0
        R0 R1  R1
        R1 R0  R1
        R1 R1  R0
    """,
    ExampleId.AND: """
        0 0  0
        0 1  0
        1 0  0
        1 1  1
    """,
    ExampleId.RDN_UNQ_XOR: """
        ra0 rb0  rab0
        ra0 rb1  rab1
        ra1 rb0  rab1
        ra1 rb1  rab0
        ra0 rB0  raB0
        ra0 rB1  raB1
        ra1 rB0  raB1
        ra1 rB1  raB0
        rA0 rb0  rAb0
        rA0 rb1  rAb1
        rA1 rb0  rAb1
        rA1 rb1  rAb0
        rA0 rB0  rAB0
        rA0 rB1  rAB1
        rA1 rB0  rAB1
        rA1 rB1  rAB0
        Ra0 Rb0  Rab0
        Ra0 Rb1  Rab1
        Ra1 Rb0  Rab1
        Ra1 Rb1  Rab0
        Ra0 RB0  RaB0
        Ra0 RB1  RaB1
        Ra1 RB0  RaB1
        Ra1 RB1  RaB0
        RA0 Rb0  RAb0
        RA0 Rb1  RAb1
        RA1 Rb0  RAb1
        RA1 Rb1  RAb0
        RA0 RB0  RAB0
        RA0 RB1  RAB1
        RA1 RB0  RAB1
        RA1 RB1  RAB0
    """,
    ExampleId.AND_DUPLICATE: """
        0 0 0  0
        0 1 0  0
        1 0 1  0
        1 1 1  1
    """,
    ExampleId.XOR_MULTI_COAL: """
        ab ac bc  0
        AB Ac Bc  0
        Ab AC bC  0
        aB aC BC  0
        Ab Ac bc  1
        aB ac Bc  1
        ab aC bC  1
        AB AC BC  1
    """,
}


def transcribed_example(example_id) -> JointTable:
    """The example rebuilt from its printed rows, each with equal mass"""
    example_id = parse_example_id(example_id)
    rows = [tuple(line.split()) for line in TRANSCRIBED_ROWS[example_id].strip().splitlines()]
    names = [f"X{i + 1}" for i in range(len(rows[0]) - 1)]
    return _uniform(names, rows)
