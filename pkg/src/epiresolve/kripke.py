"""Kripke models over equivalence relations, group updates, and JSON I/O.

Every accessibility relation is an equivalence relation and is stored as
a partition of the state set, which makes reflexivity, symmetry and
transitivity unviolable by construction.  Intersecting relations is the
common refinement of partitions; closing a union of relations is a
disjoint-set merge of their blocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

from .syntax import Agent, GroupLike, as_group, delta, group_key


@dataclass(frozen=True)
class Partition:
    blocks: frozenset  # frozenset[frozenset[str]]

    @staticmethod
    def of(blocks: Iterable[Iterable[str]], states: Optional[Iterable[str]] = None) -> "Partition":
        """Build from explicit blocks; uncovered states become implied singletons."""
        out = set()
        for block in blocks:
            b = frozenset(block)
            if not b:
                raise ValueError("empty block in partition")
            out.add(b)
        if states is not None:
            covered = frozenset().union(*out) if out else frozenset()
            universe = frozenset(states)
            stray = covered - universe
            if stray:
                raise ValueError(f"partition mentions unknown states {sorted(stray)}")
            out.update(frozenset([s]) for s in universe - covered)
        return Partition(frozenset(out))

    @staticmethod
    def discrete(states: Iterable[str]) -> "Partition":
        return Partition(frozenset(frozenset([s]) for s in states))

    @cached_property
    def _block_index(self) -> dict:
        return {s: block for block in self.blocks for s in block}

    @cached_property
    def universe(self) -> frozenset:
        return frozenset(self._block_index)

    def block_of(self, state: str) -> frozenset:
        return self._block_index[state]

    def related(self, s: str, t: str) -> bool:
        return t in self._block_index[s]

    def meet(self, other: "Partition") -> "Partition":
        """Common refinement: the intersection of the two relations."""
        return Partition(frozenset(a & b for a in self.blocks for b in other.blocks if a & b))

    def join(self, other: "Partition") -> "Partition":
        return Partition.join_all([self, other])

    @staticmethod
    def join_all(parts: Sequence["Partition"]) -> "Partition":
        """Transitive closure of the union of the relations (disjoint-set merge)."""
        parent: dict = {}

        def find(x):
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        for part in parts:
            for block in part.blocks:
                it = iter(block)
                first = next(it)
                parent.setdefault(first, first)
                for s in it:
                    parent.setdefault(s, s)
                    ra, rb = find(first), find(s)
                    if ra != rb:
                        parent[rb] = ra
        merged: dict = {}
        for s in parent:
            merged.setdefault(find(s), set()).add(s)
        return Partition(frozenset(frozenset(b) for b in merged.values()))

    def refines(self, other: "Partition") -> bool:
        """True when this relation is contained in the other."""
        return all(block <= other.block_of(next(iter(block))) for block in self.blocks)

    def restrict(self, keep: frozenset) -> "Partition":
        return Partition(frozenset(b & keep for b in self.blocks if b & keep))

    def sorted_blocks(self) -> list:
        return sorted([sorted(b) for b in self.blocks])


@dataclass(frozen=True)
class Model:
    states: frozenset
    agents: frozenset
    relations: dict  # Agent -> Partition
    valuation: dict  # atom -> frozenset[str]

    @classmethod
    def make(cls, states, relations, valuation=None, agents=None) -> "Model":
        states = frozenset(states)
        agents = frozenset(agents) if agents is not None else frozenset(relations)
        rel = {}
        for a in sorted(agents):
            if a not in relations:
                raise ValueError(f"agent {a}: missing relation")
            p = relations[a]
            rel[a] = p if isinstance(p, Partition) else Partition.of(p, states)
        val = {p: frozenset(ss) for p, ss in (valuation or {}).items()}
        return cls(states=states, agents=agents, relations=rel, valuation=val)


@dataclass(frozen=True)
class PreModel:
    states: frozenset
    agents: frozenset
    relations: dict        # Agent -> Partition
    valuation: dict        # atom -> frozenset[str]
    group_relations: dict  # Group -> Partition, one entry per non-empty group

    @classmethod
    def make(cls, states, relations, group_relations, valuation=None, agents=None) -> "PreModel":
        base = Model.make(states, relations, valuation, agents)
        grel = {}
        for key, p in group_relations.items():
            g = as_group(key)
            grel[g] = p if isinstance(p, Partition) else Partition.of(p, base.states)
        missing = [g for g in all_groups(base.agents) if g not in grel]
        if missing:
            raise ValueError(f"group {group_key(missing[0])}: missing relation")
        return cls(states=base.states, agents=base.agents, relations=base.relations,
                   valuation=base.valuation, group_relations=grel)


AnyModel = Union[Model, PreModel]


def all_groups(agents: Iterable[Agent]) -> list:
    """Every non-empty group over the agent set, smallest first."""
    ids = sorted(agents)
    out = []
    for size in range(1, len(ids) + 1):
        for combo in combinations(ids, size):
            out.append(frozenset(combo))
    return out


def _partition_problems(label: str, part: Partition, states: frozenset) -> list:
    problems = []
    seen: dict = {}
    for block in part.blocks:
        if not block:
            problems.append(f"{label}: empty block")
            continue
        for s in block:
            if s in seen and seen[s] != block:
                problems.append(f"{label}: blocks overlap on {s}")
            seen[s] = block
    extra = frozenset(seen) - states
    if extra:
        problems.append(f"{label}: mentions unknown states {','.join(sorted(extra))}")
    uncovered = states - frozenset(seen)
    if uncovered:
        problems.append(f"{label} partition does not cover {','.join(sorted(uncovered))}")
    return problems


def validate(m: AnyModel) -> list:
    """Invariant violations as data; an empty list means the structure is sound.

    For pre-models the pseudo-model conditions are reported as well, each
    prefixed with "pseudo:", so callers can tell structural defects apart
    from a merely-not-pseudo pre-model.
    """
    problems = []
    if not m.states:
        problems.append("states: empty")
    if not m.agents:
        problems.append("agents: empty")
    for a in sorted(m.agents):
        if a not in m.relations:
            problems.append(f"agent {a}: missing relation")
            continue
        problems.extend(_partition_problems(f"agent {a}", m.relations[a], m.states))
    for atom, ss in sorted(m.valuation.items()):
        stray = ss - m.states
        if stray:
            problems.append(f"atom {atom}: valuation contains unknown states {','.join(sorted(stray))}")
    if isinstance(m, PreModel):
        groups = all_groups(m.agents)
        for g in groups:
            if g not in m.group_relations:
                problems.append(f"group {group_key(g)}: missing relation")
                continue
            problems.extend(_partition_problems(f"group {group_key(g)}", m.group_relations[g], m.states))
        if not problems:
            for a in sorted(m.agents):
                if m.group_relations[frozenset([a])] != m.relations[a]:
                    problems.append(f"pseudo: singleton relation for agent {a} differs from agent relation")
            for small, big in combinations(groups, 2):
                if small < big and not m.group_relations[big].refines(m.group_relations[small]):
                    problems.append(
                        f"pseudo: monotonicity violated for {{{group_key(small)}}}⊆{{{group_key(big)}}}"
                    )
    return problems


def is_pseudo(m: PreModel) -> bool:
    return not validate(m)


def group_relation(m: Model, g: GroupLike) -> Partition:
    """Intersection of the members' relations (blockwise common refinement)."""
    g = as_group(g)
    missing = g - m.agents
    if missing:
        raise ValueError(f"undeclared agent {sorted(missing)[0]!r}")
    members = sorted(g)
    out = m.relations[members[0]]
    for a in members[1:]:
        out = out.meet(m.relations[a])
    return out


def common_relation(m: AnyModel, g: GroupLike) -> Partition:
    """Transitive closure of the union of the members' (agent) relations."""
    g = as_group(g)
    missing = g - m.agents
    if missing:
        raise ValueError(f"undeclared agent {sorted(missing)[0]!r}")
    return Partition.join_all([m.relations[a] for a in sorted(g)])


def resolve(m: Model, g: GroupLike) -> Model:
    """The group-resolved update: members' relations become the intersection."""
    g = as_group(g)
    shared = group_relation(m, g)
    relations = {a: (shared if a in g else p) for a, p in m.relations.items()}
    return Model(states=m.states, agents=m.agents, relations=relations, valuation=m.valuation)


def resolve_pre(m: PreModel, g: GroupLike) -> PreModel:
    """The resolved update of a pre-model.

    Members take over the stored group relation; a group relation moves to
    the one indexed by the union whenever the groups intersect.
    """
    g = as_group(g)
    shared = m.group_relations[g]
    relations = {a: (shared if a in g else p) for a, p in m.relations.items()}
    group_relations = {
        h: (m.group_relations[h | g] if h & g else p) for h, p in m.group_relations.items()
    }
    return PreModel(states=m.states, agents=m.agents, relations=relations,
                    valuation=m.valuation, group_relations=group_relations)


def as_premodel(m: Model) -> PreModel:
    """Embed a model: every group gets the intersection of its members' relations."""
    group_relations = {g: group_relation(m, g) for g in all_groups(m.agents)}
    return PreModel(states=m.states, agents=m.agents, relations=dict(m.relations),
                    valuation=m.valuation, group_relations=group_relations)


def iterated_relation(m: Model, gs: Sequence[GroupLike], target: Union[Agent, GroupLike]) -> Partition:
    """Relation of the target after a sequence of resolutions, computed in place.

    No intermediate model is materialized: the sequence only ever selects
    an intersection of base relations, and delta names which one.
    """
    core = frozenset([target]) if isinstance(target, str) else as_group(target)
    return group_relation(m, delta(core, gs))


def restrict(m: Model, keep: Iterable[str]) -> Model:
    """The submodel on a non-empty subset of states (blockwise restriction)."""
    keep = frozenset(keep)
    if not keep:
        raise ValueError("cannot restrict a model to an empty state set")
    stray = keep - m.states
    if stray:
        raise ValueError(f"cannot restrict to unknown states {sorted(stray)}")
    relations = {a: p.restrict(keep) for a, p in m.relations.items()}
    valuation = {atom: ss & keep for atom, ss in m.valuation.items()}
    return Model(states=keep, agents=m.agents, relations=relations, valuation=valuation)


# ---------------------------------------------------------------------------
# JSON model files


def model_to_dict(m: AnyModel) -> dict:
    out = {
        "agents": sorted(m.agents),
        "props": sorted(m.valuation),
        "states": sorted(m.states),
        "relations": {a: m.relations[a].sorted_blocks() for a in sorted(m.agents)},
        "valuation": {p: sorted(ss) for p, ss in sorted(m.valuation.items())},
    }
    if isinstance(m, PreModel):
        out["group_relations"] = {
            group_key(g): m.group_relations[g].sorted_blocks() for g in all_groups(m.agents)
        }
    return out


def model_from_dict(data: dict) -> AnyModel:
    """Decode the documented model schema; "group_relations" makes it a pre-model."""
    try:
        agents = [str(a) for a in data["agents"]]
        states = [str(s) for s in data["states"]]
        props = [str(p) for p in data.get("props", sorted(data.get("valuation", {})))]
        raw_relations = data["relations"]
        raw_valuation = data.get("valuation", {})
    except KeyError as exc:
        raise ValueError(f"model file is missing the {exc.args[0]!r} field") from None
    stray = set(raw_valuation) - set(props)
    if stray:
        raise ValueError(f"valuation for undeclared atom {sorted(stray)[0]!r}")
    valuation = {p: frozenset(str(s) for s in raw_valuation.get(p, [])) for p in props}
    relations = {}
    for a in agents:
        if a not in raw_relations:
            raise ValueError(f"agent {a}: missing relation")
        relations[a] = Partition.of(raw_relations[a], states)
    if "group_relations" not in data:
        return Model.make(states, relations, valuation, agents)
    group_relations = {
        key: Partition.of(blocks, states) for key, blocks in data["group_relations"].items()
    }
    return PreModel.make(states, relations, group_relations, valuation, agents)


def load_model(path) -> AnyModel:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from None
    return model_from_dict(data)


def save_model(m: AnyModel, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(model_to_dict(m), handle, indent=2)
        handle.write("\n")
