"""Pre-model bisimulation and trans-bisimulation checking.

Both checkers compute the greatest fixpoint by deleting pairs from the
atom-agreeing start relation until every surviving pair satisfies the
back-and-forth clauses.  Deletion is round-based over sorted pairs, so
witnesses are reproducible.  Path-existence in the trans-bisimulation
zig clauses collapses to one closure computation, because all relations
involved are equivalences.
"""

from __future__ import annotations

from typing import Iterable, Optional, Tuple, Union

from .kripke import (
    Model,
    Partition,
    PreModel,
    all_groups,
    as_premodel,
    group_relation,
)

Pair = Tuple[str, str]


def _atoms_agree(a, x: str, b, y: str) -> bool:
    for atom in set(a.valuation) | set(b.valuation):
        if (x in a.valuation.get(atom, frozenset())) != (y in b.valuation.get(atom, frozenset())):
            return False
    return True


def _as_pre(m: Union[Model, PreModel]) -> PreModel:
    return m if isinstance(m, PreModel) else as_premodel(m)


def _pre_labels(a: PreModel, b: PreModel) -> list:
    if a.agents != b.agents:
        raise ValueError("bisimulation requires a shared agent set")
    labels = []
    for i in sorted(a.agents):
        labels.append((a.relations[i], b.relations[i]))
    for g in all_groups(a.agents):
        labels.append((a.group_relations[g], b.group_relations[g]))
    return labels


def bisimilar_pre(a: Union[Model, PreModel], s: str, b: Union[Model, PreModel], t: str):
    """Greatest bisimulation between two pre-models, if it links (s, t).

    Genuine models are embedded as pre-models first.  Returns the witness
    relation as a frozenset of state pairs, or None.
    """
    a, b = _as_pre(a), _as_pre(b)
    labels = _pre_labels(a, b)
    z = {
        (x, y)
        for x in sorted(a.states)
        for y in sorted(b.states)
        if _atoms_agree(a, x, b, y)
    }
    changed = True
    while changed:
        changed = False
        for pair in sorted(z):
            x, y = pair
            ok = all(
                any((xp, yp) in z for yp in pb.block_of(y))
                for pa, pb in labels
                for xp in pa.block_of(x)
            ) and all(
                any((xp, yp) in z for xp in pa.block_of(x))
                for pa, pb in labels
                for yp in pb.block_of(y)
            )
            if not ok:
                z.discard(pair)
                changed = True
    return frozenset(z) if (s, t) in z else None


def is_pre_bisimulation(a: Union[Model, PreModel], b: Union[Model, PreModel], pairs: Iterable[Pair]) -> list:
    """Clause-by-clause validation of a claimed bisimulation; violations as data."""
    a, b = _as_pre(a), _as_pre(b)
    z = set(pairs)
    problems = []
    if not z:
        problems.append("relation is empty")
    labels = [("agent " + i, a.relations[i], b.relations[i]) for i in sorted(a.agents)]
    labels += [
        ("group " + ",".join(sorted(g)), a.group_relations[g], b.group_relations[g])
        for g in all_groups(a.agents)
    ]
    for x, y in sorted(z):
        if x not in a.states or y not in b.states:
            problems.append(f"pair ({x},{y}) mentions unknown states")
            continue
        if not _atoms_agree(a, x, b, y):
            problems.append(f"(at) fails for ({x},{y})")
        for name, pa, pb in labels:
            for xp in sorted(pa.block_of(x)):
                if not any((xp, yp) in z for yp in pb.block_of(y)):
                    problems.append(f"(zig) fails for ({x},{y}) on {name} toward {xp}")
            for yp in sorted(pb.block_of(y)):
                if not any((xp, yp) in z for xp in pa.block_of(x)):
                    problems.append(f"(zag) fails for ({x},{y}) on {name} toward {yp}")
    return problems


def _trans_labels(m: Model, n: PreModel):
    """Per-label data for the trans-bisimulation clauses.

    zig for an agent i reaches along the closure of the agent relation
    together with every group relation containing i; zig for a group G
    (of size 2 or more, with the intersection relation on the model side)
    reaches along the closure of the relations of all supergroups of G;
    zag steps along single relations, with groups read as intersections
    on the model side.
    """
    if m.agents != n.agents:
        raise ValueError("trans-bisimulation requires a shared agent set")
    groups = all_groups(m.agents)
    model_group = {g: group_relation(m, g) for g in groups}
    zig = []
    for i in sorted(m.agents):
        reach = Partition.join_all(
            [n.relations[i]] + [n.group_relations[g] for g in groups if i in g]
        )
        zig.append((m.relations[i], reach))
    for g in groups:
        if len(g) < 2:
            continue
        reach = Partition.join_all([n.group_relations[h] for h in groups if g <= h])
        zig.append((model_group[g], reach))
    zag = [(m.relations[i], n.relations[i]) for i in sorted(m.agents)]
    zag += [(model_group[g], n.group_relations[g]) for g in groups]
    return zig, zag


def trans_bisimilar(m: Model, s: str, n: Union[Model, PreModel], t: str):
    """Greatest trans-bisimulation between a model and a pre-model, linking (s, t)."""
    n = _as_pre(n)
    zig, zag = _trans_labels(m, n)
    z = {
        (x, y)
        for x in sorted(m.states)
        for y in sorted(n.states)
        if _atoms_agree(m, x, n, y)
    }
    changed = True
    while changed:
        changed = False
        for pair in sorted(z):
            x, y = pair
            ok = all(
                any((xp, yp) in z for yp in reach.block_of(y))
                for part, reach in zig
                for xp in part.block_of(x)
            ) and all(
                any((xp, yp) in z for xp in part.block_of(x))
                for part, rel in zag
                for yp in rel.block_of(y)
            )
            if not ok:
                z.discard(pair)
                changed = True
    return frozenset(z) if (s, t) in z else None


def is_trans_bisimulation(m: Model, n: Union[Model, PreModel], pairs: Iterable[Pair]) -> list:
    """Clause-by-clause validation of a claimed trans-bisimulation."""
    n = _as_pre(n)
    zig, zag = _trans_labels(m, n)
    z = set(pairs)
    problems = []
    if not z:
        problems.append("relation is empty")
    for x, y in sorted(z):
        if x not in m.states or y not in n.states:
            problems.append(f"pair ({x},{y}) mentions unknown states")
            continue
        if not _atoms_agree(m, x, n, y):
            problems.append(f"(at) fails for ({x},{y})")
        for idx, (part, reach) in enumerate(zig):
            for xp in sorted(part.block_of(x)):
                if not any((xp, yp) in z for yp in reach.block_of(y)):
                    problems.append(f"(zig) fails for ({x},{y}) on label {idx} toward {xp}")
        for idx, (part, rel) in enumerate(zag):
            for yp in sorted(rel.block_of(y)):
                if not any((xp, yp) in z for xp in part.block_of(x)):
                    problems.append(f"(zag) fails for ({x},{y}) on label {idx} toward {yp}")
    return problems


def duplicate_state(p: Union[Model, PreModel], x: str, new_id: Optional[str] = None) -> PreModel:
    """Add an indistinguishable copy of a state.

    The copy inherits the valuation of x and joins exactly the blocks
    containing x in every agent and group relation, so identifying the
    two states is a bisimulation.  The fresh id defaults to x with primes
    appended until it is unused.
    """
    p = _as_pre(p)
    if x not in p.states:
        raise ValueError(f"unknown state {x!r}")
    if new_id is None:
        new_id = x + "'"
        while new_id in p.states:
            new_id += "'"
    elif new_id in p.states:
        raise ValueError(f"state id {new_id!r} already in use")

    def widened(part: Partition) -> Partition:
        home = part.block_of(x)
        return Partition(frozenset((b | {new_id}) if b == home else b for b in part.blocks))

    return PreModel(
        states=p.states | {new_id},
        agents=p.agents,
        relations={a: widened(part) for a, part in p.relations.items()},
        valuation={atom: (ss | {new_id} if x in ss else ss) for atom, ss in p.valuation.items()},
        group_relations={g: widened(part) for g, part in p.group_relations.items()},
    )


def witness_to_pairs(witness: Optional[frozenset]) -> Optional[list]:
    """Witness relations as sorted JSON-ready pairs."""
    if witness is None:
        return None
    return [list(pair) for pair in sorted(witness)]
