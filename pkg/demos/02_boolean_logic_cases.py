"""The pure algebra of single-cell Boolean logic.

A gate assigns the four drive parameters (transistor gate G, top electrode TE,
bottom electrode BE, initial state I) to constants or to the inputs p, q.
Every resolved bit pattern lands on one of 16 cases; only case 4 sets and
case 5 resets the cell, everything else leaves the stored bit alone.  The
exhaustive synthesizer finds a working assignment for each of the 16
two-input truth tables.

Run:  python demos/02_boolean_logic_cases.py
"""

import itertools

from memlogic.logic1t1r import (
    CASE_TABLE,
    builtin_mapping,
    evaluate_mapping,
    synthesize_mapping,
    truth_table_of,
)

print("input case table (G, TE, BE, I -> process):")
for case in CASE_TABLE:
    process = case.process or "-"
    marker = "  <- switches" if case.possible else ""
    print(f"  case {case.case_id:>2}: g={case.g} te={case.te} be={case.be} "
          f"i={case.i}  te-be={case.te_minus_be:+d}  {process:<5}{marker}")

print()
print("named gates, evaluated for every input pair:")
for name in ("OR", "AND", "NIMP", "XOR", "NOTP"):
    mapping = builtin_mapping(name)
    cells = []
    for p, q in itertools.product((0, 1), repeat=2):
        ev = evaluate_mapping(mapping, p, q)
        cells.append(f"{p}{q}->case{ev.case_id:>2}:{ev.output}")
    terms = f"g={mapping.g.value} te={mapping.te.value} be={mapping.be.value} i={mapping.i.value}"
    print(f"  {name:<5} ({terms:<24}) {'  '.join(cells)}")

print()
print("exhaustive synthesis of all 16 two-input functions:")
for n in range(16):
    bits = format(n, "04b")
    mapping = synthesize_mapping(bits)
    assert truth_table_of(mapping) == bits
    print(f"  {bits}: g={mapping.g.value:<2} te={mapping.te.value:<2} "
          f"be={mapping.be.value:<2} i={mapping.i.value:<2}")
print("every truth table is realizable with one cell and one pulse.")
