# Soundness as a sweep: instantiate every schema of the two proof systems
# with seeded formulas and verify validity over all small models.  A
# deliberately corrupted schema is caught with a concrete countermodel.

from epiresolve import SearchBounds, check_rule_rrc, check_schema, satisfies
from epiresolve.syntax import D, Iff, R, render

bounds = SearchBounds(max_states=2, agents=("1", "2"), atoms=("p",), instance_count=60)

print(check_schema("rd", bounds).text())
print()
print(check_schema("rcd", bounds).text())

# The induction rule for resolved common knowledge, checked model-locally:
# when the premise holds at every state of a model, so must the conclusion.
print()
print(check_rule_rrc(SearchBounds(max_states=3, agents=("1", "2"), atoms=("p",),
                                  instance_count=60)).text())


# Now corrupt one schema: merge distributed knowledge over the intersection
# instead of the union of the groups.  The sweep finds a countermodel.
def corrupted(gen):
    g, h = gen.overlapping_pair()
    a = gen.formula()
    return Iff(R(g, D(h, a)), D(g & h, R(g, a)))


report = check_schema("rd", SearchBounds(max_states=3, agents=("1", "2"), atoms=("p",),
                                         instance_count=40),
                      override={"RD1": corrupted}, schemas=["RD1"], include_rules=False)
violation = report.schemata[0].violations[0]
print("\ncorrupted RD1 caught by:", render(violation.instance))
print("falsified at state", violation.state, "->",
      satisfies(violation.model, violation.state, violation.instance))
