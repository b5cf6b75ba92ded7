# Resolution operators can be rewritten away, pushing them through the
# connectives until they sit on atoms and disappear.  Common knowledge
# blocks the rewrite unless the groups are disjoint or nested.

from epiresolve import (
    SearchBounds,
    find_countermodel,
    parse,
    reduce,
    render,
)
from epiresolve.syntax import Iff

AG = {"1", "2", "3"}

for text in [
    "R{1,2}(p & ~K1 p)",     # knowledge inside the group becomes distributed
    "R{1,2} K3 p",           # outsiders keep their own knowledge
    "R{1,2} D{2,3} p",       # overlapping groups merge
    "R{1} (K2 p & C{1,2} p)",  # a singleton resolution changes nothing
    "R{1,3} R{1,2} K1 p",    # iterated resolutions reduce inside-out
    "R{1,2} C{1,2} p",       # a contained group: common knowledge reduces
    "R{1,2} C{1,3} p",       # overlapping, not contained: stuck
]:
    f = parse(text, AG)
    print(f"{render(f):30}  ~>  {render(reduce(f))}")

# Every rewrite above is an equivalence.  Spot-check one with the bounded
# searcher: no model up to 4 states tells the formula from its normal form.
f = parse("R{1,2}(p & ~K1 p)", AG)
out = find_countermodel(Iff(f, reduce(f)), SearchBounds(max_states=4, agents=("1", "2")))
print("\ncountermodel for the rewrite up to 4 states:", out.verdict)
