# Exhaustive search over every model up to a size bound: satisfiability
# witnesses, countermodels, and honest exhaustion certificates.

import json

from epiresolve import (
    SearchBounds,
    find_countermodel,
    find_model,
    model_to_dict,
    parse,
    reduce,
    render,
)
from epiresolve.syntax import Iff

AG3 = ("1", "2", "3")

# The distributed Moore sentence is satisfiable: nobody needs to know p
# for it to be distributed knowledge that p and 1 does not know p.
f = parse("D{1,2}(p & ~K1 p)", {"1", "2"})
out = find_model(f, SearchBounds(max_states=2))
print("witness for", render(f))
print(json.dumps(model_to_dict(out.witness.model)), "at state", out.witness.state)

# Its resolved cousin is satisfiable too, just not in the same models:
# two agents who are both ignorant of p stay ignorant after sharing.
g = parse("R{1,2}(p & ~K1 p)", {"1", "2"})
for bound in (1, 2, 3):
    direct = find_model(g, SearchBounds(max_states=bound))
    reduced = find_model(reduce(g), SearchBounds(max_states=bound))
    print(f"bound {bound}: {render(g)} is {direct.verdict}, "
          f"its normal form {render(reduce(g))} is {reduced.verdict}")

# No countermodel up to a bound is not a validity proof, but for axiom
# instances it is reassuring.
t_d = parse("D{1,2} p -> p", {"1", "2"})
print("\ncountermodel for", render(t_d), "->", find_countermodel(t_d, SearchBounds(max_states=4)).verdict)

# Where overlapping groups meet common knowledge, resolution and common
# knowledge refuse to commute, and the searcher produces the witness.
lhs = parse("R{1,2} C{1,3} p", set(AG3))
rhs = parse("C{1,3} R{1,2} p", set(AG3))
out = find_countermodel(Iff(lhs, rhs), SearchBounds(max_states=5, agents=AG3))
print("\nwhere the commutation fails:")
print(json.dumps(model_to_dict(out.witness.model)), "at state", out.witness.state)
