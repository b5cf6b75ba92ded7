# What a group comes to know after pooling everything its members can
# distinguish: resolve a model and watch the relations shrink to their
# intersection.

from epiresolve import fig1, group_relation, parse, resolve, satisfies

m = fig1()
print("states:", sorted(m.states))
for a in sorted(m.agents):
    print(f"agent {a} cannot tell apart:", m.relations[a].sorted_blocks())
print("p holds at:", sorted(m.valuation["p"]))

# Distributed knowledge quantifies over the intersection of the members'
# relations, evaluated in the model as it is now.
print("\nintersection for {1,2}:", group_relation(m, "1,2").sorted_blocks())
moore = parse("D{1,2}(p & ~K1 p)", m.agents)
print("D{1,2}(p & ~K1 p) at t:", satisfies(m, "t", moore))

# Resolution is a model update: each member's relation becomes that
# intersection, everywhere.  Afterwards agent 1 knows p at t.
core = resolve(m, "1,2")
for a in sorted(core.agents):
    print(f"after resolving, agent {a}:", core.relations[a].sorted_blocks())
print("R{1,2}(p & K1 p) at t:", satisfies(m, "t", parse("R{1,2}(p & K1 p)", m.agents)))

# The two operators genuinely differ: the distributed claim survives at t,
# but after actually sharing, agent 1 knows p, so the same body fails.
print("R{1,2}(p & ~K1 p) at t:", satisfies(m, "t", parse("R{1,2}(p & ~K1 p)", m.agents)))
