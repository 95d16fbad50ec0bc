"""Tree-shaped tableau construction for LTL with loop detection.

Expansion rewrites one label formula at a time (And chains, Or forks,
G/F/U via their fixpoint unfoldings); a fully decomposed label takes a
synchronous step that strips one X from every X-formula. A branch whose
post-step label repeats an earlier one closes: it is Ticked when every F/U
eventuality in the loop label was fulfilled on the branch inside the loop
section, Crossed otherwise. Labels holding complementary literals are
Crossed immediately.

Branches that close by looping without fulfilling their eventualities are
unsuccessful for satisfiability but still describe a structural way the
formula decomposes; refine() keeps them (pruning only contradictions) so
the ranking machinery can count them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .formula import (
    FALSE,
    And,
    Atom,
    Finally,
    Formula,
    Globally,
    Next,
    Not,
    Or,
    TrueConst,
    Until,
    atoms,
    format_formula,
    is_literal,
)
from .system import SystemAlphabet


class NodeStatus(Enum):
    OPEN = "open"
    TICKED = "ticked"
    CROSSED = "crossed"


CROSS_CONTRADICTION = "contradiction"
CROSS_LOOP = "loop"


@dataclass
class TableauNode:
    label: tuple[Formula, ...]
    children: list["TableauNode"] = field(default_factory=list)
    status: NodeStatus = NodeStatus.OPEN
    cross_reason: str | None = None

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def is_poised(self) -> bool:
        """Only literals and X-formulas remain: ready for a temporal step."""
        return all(is_literal(g) or isinstance(g, Next) for g in self.label)


@dataclass
class Branch:
    nodes: tuple[TableauNode, ...]

    @property
    def leaf(self) -> TableauNode:
        return self.nodes[-1]

    @property
    def formulas(self) -> frozenset[Formula]:
        return frozenset(g for n in self.nodes for g in n.label)

    @property
    def step_atoms(self) -> frozenset[str]:
        """Atoms of step-point labels: branch literals plus deferred
        obligations (X-formulas and the closing loop label)."""
        out: set[str] = set()
        for n in self.nodes:
            if n.is_poised or n is self.nodes[-1]:
                for g in n.label:
                    out |= atoms(g)
        return frozenset(out)


@dataclass
class Tableau:
    formula: Formula
    root: TableauNode | None
    refined: bool = False

    def branches(self) -> list[Branch]:
        if self.root is None:
            return []
        out: list[Branch] = []
        stack: list[tuple[TableauNode, tuple[TableauNode, ...]]] = [
            (self.root, (self.root,))
        ]
        while stack:
            node, path = stack.pop()
            if node.is_leaf:
                out.append(Branch(path))
            else:
                for child in reversed(node.children):
                    stack.append((child, path + (child,)))
        return out

    def leaves(self) -> list[TableauNode]:
        return [b.leaf for b in self.branches()]


@dataclass(frozen=True)
class BranchProfile:
    branch_id: int
    atoms: frozenset[str]
    per_process_count: dict[str, int] = field(compare=False, hash=False)


def _make_label(items: Iterable[Formula]) -> tuple[Formula, ...]:
    out: list[Formula] = []
    for g in items:
        if isinstance(g, TrueConst) or g in out:
            continue
        out.append(g)
    return tuple(out)


def _contradictory(label: tuple[Formula, ...]) -> bool:
    if FALSE in label:
        return True
    positive = {g.name for g in label if isinstance(g, Atom)}
    return any(
        isinstance(g, Not) and isinstance(g.child, Atom) and g.child.name in positive
        for g in label
    )


def _pick_expandable(label: tuple[Formula, ...]) -> tuple[int, Formula] | None:
    for i, g in enumerate(label):
        if isinstance(g, (And, Or, Finally, Globally, Until)):
            return i, g
        if isinstance(g, Not) and not isinstance(g.child, (Atom, TrueConst)):
            raise ValueError(f"formula must be in negation normal form: {g}")
    return None


def _replace(label: tuple[Formula, ...], i: int, repl: Iterable[Formula]):
    return _make_label(label[:i] + tuple(repl) + label[i + 1 :])


def build(f: Formula) -> Tableau:
    """Construct the full tableau for an NNF formula. Always terminates:
    branch depth is bounded by the number of distinct branch labels.

    Loop detection compares a post-step label against every ancestor label
    on the branch (the repeated-label fixpoint); the eventuality guard then
    requires each F/U obligation in the repeated label to have been
    fulfilled on the branch within the repeated section.
    """
    root = TableauNode(_make_label([f]))
    # work items: (node, ancestor label sets along the branch (index = depth),
    #              fulfillments as (eventuality, depth where its goal was taken))
    stack: list[
        tuple[TableauNode, tuple[frozenset[Formula], ...], tuple[tuple[Formula, int], ...]]
    ] = [(root, (frozenset(root.label),), ())]
    while stack:
        node, ancestors, fulfilled = stack.pop()
        label = node.label
        if _contradictory(label):
            node.status = NodeStatus.CROSSED
            node.cross_reason = CROSS_CONTRADICTION
            continue
        picked = _pick_expandable(label)
        if picked is not None:
            i, g = picked

            def push(child: TableauNode, fulfills: Formula | None = None) -> None:
                node.children.append(child)
                extra = ((fulfills, len(ancestors)),) if fulfills is not None else ()
                stack.append(
                    (child, ancestors + (frozenset(child.label),), fulfilled + extra)
                )

            if isinstance(g, And):
                push(TableauNode(_replace(label, i, g.children)))
            elif isinstance(g, Or):
                for d in g.children:
                    push(TableauNode(_replace(label, i, [d])))
            elif isinstance(g, Globally):
                push(TableauNode(_replace(label, i, [g.child, Next(g)])))
            elif isinstance(g, Finally):
                push(TableauNode(_replace(label, i, [g.child])), fulfills=g)
                push(TableauNode(_replace(label, i, [Next(g)])))
            elif isinstance(g, Until):
                push(TableauNode(_replace(label, i, [g.right])), fulfills=g)
                push(TableauNode(_replace(label, i, [g.left, Next(g)])))
            continue
        # poised: literals and X-formulas only
        next_label = _make_label(g.child for g in label if isinstance(g, Next))
        if not next_label:
            node.status = NodeStatus.TICKED
            continue
        next_set = frozenset(next_label)
        hits = [d for d, lbl in enumerate(ancestors) if lbl == next_set]
        if hits:
            anchor = max(hits)
            pending = [g for g in next_label if isinstance(g, (Finally, Until))]
            ok = all(
                any(e == g and j >= anchor for e, j in fulfilled) for g in pending
            )
            leaf = TableauNode(next_label)
            if ok:
                leaf.status = NodeStatus.TICKED
            else:
                leaf.status = NodeStatus.CROSSED
                leaf.cross_reason = CROSS_LOOP
            node.children.append(leaf)
            continue
        child = TableauNode(next_label)
        node.children.append(child)
        stack.append((child, ancestors + (next_set,), fulfilled))
    return Tableau(f, root)


def is_satisfiable(t: Tableau) -> bool:
    """True iff the tableau has at least one Ticked branch."""
    return any(leaf.status is NodeStatus.TICKED for leaf in t.leaves())


def refine(t: Tableau) -> Tableau:
    """Prune contradiction-crossed branches; loop-closed branches stay as
    structural branches. Idempotent."""

    def keep(node: TableauNode) -> TableauNode | None:
        if node.is_leaf:
            if (
                node.status is NodeStatus.CROSSED
                and node.cross_reason == CROSS_CONTRADICTION
            ):
                return None
            return TableauNode(node.label, [], node.status, node.cross_reason)
        kept = [c for c in (keep(child) for child in node.children) if c is not None]
        if not kept:
            return None
        return TableauNode(node.label, kept, node.status, node.cross_reason)

    root = keep(t.root) if t.root is not None else None
    return Tableau(t.formula, root, refined=True)


def branch_profiles(t: Tableau, alpha: SystemAlphabet) -> list[BranchProfile]:
    """One profile per structural branch of a refined tableau, with atom
    counts split by owning process."""
    profiles = []
    for i, br in enumerate(t.branches()):
        branch_atoms = br.step_atoms
        counts = {
            pid: len(branch_atoms & alpha.atoms_of(pid)) for pid in alpha.processes
        }
        profiles.append(BranchProfile(i, branch_atoms, counts))
    return profiles


def to_dot(t: Tableau) -> str:
    """Graphviz DOT rendering; labels use the concrete formula grammar."""
    lines = ["digraph tableau {", '  node [shape=box, fontname="monospace"];']
    if t.root is not None:
        counter = 0
        stack = [(t.root, None)]
        ids: dict[int, int] = {}
        order: list[tuple[TableauNode, int | None]] = []
        while stack:
            node, parent = stack.pop()
            ids[id(node)] = counter
            order.append((node, parent))
            counter += 1
            for child in reversed(node.children):
                stack.append((child, id(node)))
        for node, parent in order:
            text = ", ".join(format_formula(g) for g in node.label) or "(empty)"
            text = text.replace("\\", "\\\\").replace('"', '\\"')
            deco = ""
            color = ""
            if node.status is NodeStatus.TICKED:
                deco = "  [tick]"
                color = ', color="darkgreen"'
            elif node.status is NodeStatus.CROSSED:
                deco = f"  [x:{node.cross_reason}]"
                color = ', color="red"'
            lines.append(f'  n{ids[id(node)]} [label="{text}{deco}"{color}];')
            if parent is not None:
                lines.append(f"  n{ids[parent]} -> n{ids[id(node)]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
