"""Ten small candidate/reference pairs with hand-enumerated dataflow facts.

Each snippet is at most 10 lines and parses cleanly. The fact lists were
written out by hand from the definition (definitions indexed in order of
first binding, uses referencing those indices, unknown names as -1,
right-hand sides before left-hand sides) so they can pin the extractor
without circular reasoning.
"""

from __future__ import annotations

D = "def"
U = "use"

# (name, candidate, reference, cand_facts, ref_facts)
ORACLE_PAIRS = [
    (
        "rename_chain",
        "a = 1\nb = a",
        "x = 1\ny = x",
        [(D, 0, ()), (U, 0), (D, 1, (0,))],
        [(D, 0, ()), (U, 0), (D, 1, (0,))],
    ),
    (
        "broken_chain",
        "a = 1\nb = a",
        "a = 1\nb = 2",
        [(D, 0, ()), (U, 0), (D, 1, (0,))],
        [(D, 0, ()), (D, 1, ())],
    ),
    (
        "arith_pipeline",
        "w = 0.5\nx = 2.0\ny = w * x\nz = y + x\nprint(z)",
        "w = 0.5\nx = 2.0\ny = w * x\nz = y + x\nprint(z)",
        [
            (D, 0, ()),
            (D, 1, ()),
            (U, 0),
            (U, 1),
            (D, 2, (0, 1)),
            (U, 2),
            (U, 1),
            (D, 3, (1, 2)),
            (U, -1),
            (U, 3),
        ],
        [
            (D, 0, ()),
            (D, 1, ()),
            (U, 0),
            (U, 1),
            (D, 2, (0, 1)),
            (U, 2),
            (U, 1),
            (D, 3, (1, 2)),
            (U, -1),
            (U, 3),
        ],
    ),
    (
        "arith_pipeline_renamed",
        "alpha = 0.5\nbeta = 2.0\ngamma = alpha * beta\ndelta = gamma + beta\nprint(delta)",
        "w = 0.5\nx = 2.0\ny = w * x\nz = y + x\nprint(z)",
        [
            (D, 0, ()),
            (D, 1, ()),
            (U, 0),
            (U, 1),
            (D, 2, (0, 1)),
            (U, 2),
            (U, 1),
            (D, 3, (1, 2)),
            (U, -1),
            (U, 3),
        ],
        [
            (D, 0, ()),
            (D, 1, ()),
            (U, 0),
            (U, 1),
            (D, 2, (0, 1)),
            (U, 2),
            (U, 1),
            (D, 3, (1, 2)),
            (U, -1),
            (U, 3),
        ],
    ),
    (
        "function_call",
        "def f(x):\n    return x + 1\nr = f(3)",
        "def f(x):\n    return x + 1\nr = f(3)",
        [(D, 0, ()), (D, 1, ()), (U, 1), (U, 0), (D, 2, (0,))],
        [(D, 0, ()), (D, 1, ()), (U, 1), (U, 0), (D, 2, (0,))],
    ),
    (
        "loop_rebind",
        "for i in items:\n    total = total + i",
        "for j in items:\n    total = total + j",
        [(U, -1), (D, 0, (-1,)), (U, -1), (U, 0), (D, 1, (-1, 0))],
        [(U, -1), (D, 0, (-1,)), (U, -1), (U, 0), (D, 1, (-1, 0))],
    ),
    (
        "literal_swap",
        "s = 'hello'",
        "s = 'world'",
        [(D, 0, ())],
        [(D, 0, ())],
    ),
    (
        "import_alias",
        "import jax\nv = jax.numpy",
        "import numpy\nv = numpy.array",
        [(D, 0, ()), (U, 0), (D, 1, (0,))],
        [(D, 0, ()), (U, 0), (D, 1, (0,))],
    ),
    (
        "missing_half",
        "a = 1",
        "b = 2\nc = b",
        [(D, 0, ())],
        [(D, 0, ()), (U, 0), (D, 1, (0,))],
    ),
    (
        "operator_swap",
        "x = 1\ny = 2\nz = x + y",
        "x = 1\ny = 2\nz = x - y",
        [(D, 0, ()), (D, 1, ()), (U, 0), (U, 1), (D, 2, (0, 1))],
        [(D, 0, ()), (D, 1, ()), (U, 0), (U, 1), (D, 2, (0, 1))],
    ),
]
