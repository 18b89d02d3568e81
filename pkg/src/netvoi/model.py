"""Binary-component networks and monotone structure functions.

Component states pack into integer masks: bit i carries the state of
component i, with 1 meaning the component works and 0 that it failed.
Masks enumerate states in ascending order 0 .. 2^N - 1, so mask 0 is the
fully failed system and the all-ones mask is the fully working one.
"""

from __future__ import annotations

import operator
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError, NonMonotoneError, SizeCapError

DEFAULT_COMPONENT_CAP = 20


def check_state(state: int, n_components: int) -> None:
    if state < 0 or state >> n_components:
        raise InvalidStateError(
            f"mask {state} does not encode a {n_components}-component state"
        )


@dataclass(frozen=True)
class ComponentRef:
    """Formula leaf referring to one component by index."""

    index: int


@dataclass(frozen=True)
class SeriesNode:
    parts: tuple


@dataclass(frozen=True)
class ParallelNode:
    parts: tuple


def _as_node(part):
    if isinstance(part, (ComponentRef, SeriesNode, ParallelNode)):
        return part
    if isinstance(part, bool):
        raise TypeError(f"cannot use {part!r} in a structure formula")
    try:
        return ComponentRef(operator.index(part))
    except TypeError:
        raise TypeError(f"cannot use {part!r} in a structure formula") from None


def series(*parts) -> SeriesNode:
    """All parts must work for the composition to work."""
    if not parts:
        raise ValueError("series() needs at least one part")
    return SeriesNode(tuple(_as_node(p) for p in parts))


def parallel(*parts) -> ParallelNode:
    """The composition works while at least one part works."""
    if not parts:
        raise ValueError("parallel() needs at least one part")
    return ParallelNode(tuple(_as_node(p) for p in parts))


def _collect_indices(node, out):
    if isinstance(node, ComponentRef):
        out.append(node.index)
    else:
        for part in node.parts:
            _collect_indices(part, out)


def _eval_node(node, state: int) -> int:
    if isinstance(node, ComponentRef):
        return (state >> node.index) & 1
    if isinstance(node, SeriesNode):
        return int(all(_eval_node(p, state) for p in node.parts))
    return int(any(_eval_node(p, state) for p in node.parts))


def _table_node(node, masks: np.ndarray) -> np.ndarray:
    if isinstance(node, ComponentRef):
        return ((masks >> node.index) & 1).astype(bool)
    tables = [_table_node(p, masks) for p in node.parts]
    if isinstance(node, SeriesNode):
        return np.logical_and.reduce(tables)
    return np.logical_or.reduce(tables)


class StructureFunction:
    """Monotone map from component-state masks to the binary system state."""

    n_components: int

    def evaluate(self, state: int) -> int:
        raise NotImplementedError

    def truth_table(self) -> np.ndarray:
        """System state for every mask, as a read-only bool vector of length 2^N."""
        raise NotImplementedError


class FormulaTree(StructureFunction):
    """Nested series/parallel composition over component references.

    Every component index must appear exactly once, which makes the
    function monotone with every component relevant by construction.
    """

    def __init__(self, root):
        root = _as_node(root)
        indices: list[int] = []
        _collect_indices(root, indices)
        counts = Counter(indices)
        duplicates = sorted(i for i, c in counts.items() if c > 1)
        if duplicates:
            raise ValueError(f"components referenced more than once: {duplicates}")
        if not indices:
            raise ValueError("formula references no components")
        n = max(indices) + 1
        missing = sorted(set(range(n)) - set(indices))
        if missing or min(indices) < 0:
            raise ValueError(
                f"component indices must cover 0..{n - 1} exactly; missing {missing}"
            )
        self.root = root
        self.n_components = n
        self._table: np.ndarray | None = None

    def evaluate(self, state: int) -> int:
        check_state(state, self.n_components)
        return _eval_node(self.root, state)

    def truth_table(self) -> np.ndarray:
        if self._table is None:
            masks = np.arange(1 << self.n_components, dtype=np.int64)
            table = _table_node(self.root, masks)
            table.flags.writeable = False
            self._table = table
        return self._table


class STGraph(StructureFunction):
    """Source-to-sink connectivity with components as nodes.

    ``component_nodes[i]`` is the node label of component i. The source and
    sink terminals always conduct, as does any extra label appearing in the
    edge list (a junction). A component node conducts only while working;
    the system works when the sink is reachable from the source.
    """

    def __init__(self, component_nodes, edges, source="o", sink="s", directed=False):
        comp_labels = list(component_nodes)
        if len(set(comp_labels)) != len(comp_labels):
            raise ValueError("component node labels must be distinct")
        if source == sink:
            raise ValueError("source and sink must differ")
        if source in comp_labels or sink in comp_labels:
            raise ValueError("terminals cannot be component nodes")

        edge_list = []
        for edge in edges:
            u, v = edge
            if u == v:
                raise ValueError(f"self-loop on node {u!r}")
            edge_list.append((u, v))
        if not edge_list:
            raise ValueError("graph has no edges")

        touched = {u for u, _ in edge_list} | {v for _, v in edge_list}
        missing = [c for c in comp_labels if c not in touched]
        if missing:
            raise ValueError(f"components never referenced by an edge: {missing}")
        for terminal in (source, sink):
            if terminal not in touched:
                raise ValueError(f"terminal {terminal!r} never referenced by an edge")

        self.n_components = len(comp_labels)
        self.component_nodes = tuple(comp_labels)
        self.edges = tuple(edge_list)
        self.source = source
        self.sink = sink
        self.directed = bool(directed)

        self._comp_of = {label: i for i, label in enumerate(comp_labels)}
        arcs = list(edge_list)
        if not self.directed:
            arcs += [(v, u) for u, v in edge_list]
        self._arcs = tuple(arcs)
        adjacency: dict = {}
        for u, v in arcs:
            adjacency.setdefault(u, []).append(v)
        self._adjacency = adjacency
        self._table: np.ndarray | None = None

    def _passable(self, label, state: int) -> bool:
        i = self._comp_of.get(label)
        return True if i is None else bool((state >> i) & 1)

    def evaluate(self, state: int) -> int:
        check_state(state, self.n_components)
        stack = [self.source]
        seen = {self.source}
        while stack:
            node = stack.pop()
            if node == self.sink:
                return 1
            for nxt in self._adjacency.get(node, ()):
                if nxt not in seen and self._passable(nxt, state):
                    seen.add(nxt)
                    stack.append(nxt)
        return 0

    def truth_table(self) -> np.ndarray:
        if self._table is not None:
            return self._table
        size = 1 << self.n_components
        masks = np.arange(size, dtype=np.int64)
        passable = {}
        reach = {}
        nodes = {u for arc in self._arcs for u in arc}
        for label in nodes:
            i = self._comp_of.get(label)
            if i is None:
                passable[label] = np.ones(size, dtype=bool)
            else:
                passable[label] = ((masks >> i) & 1).astype(bool)
            reach[label] = np.zeros(size, dtype=bool)
        reach[self.source][:] = True
        # Propagate reachability over all masks at once until a fixpoint;
        # each full sweep extends every frontier by at least one arc.
        changed = True
        while changed:
            changed = False
            for u, v in self._arcs:
                add = reach[u] & passable[v] & ~reach[v]
                if add.any():
                    reach[v] |= add
                    changed = True
        table = reach[self.sink].copy()
        table.flags.writeable = False
        self._table = table
        return table


class TruthTable(StructureFunction):
    """Explicit system state per mask, rejected unless monotone."""

    def __init__(self, values):
        arr = np.array([bool(int(v)) for v in values], dtype=bool)
        size = arr.size
        if size < 2 or size & (size - 1):
            raise ValueError("truth table length must be a power of two, at least 2")
        n = size.bit_length() - 1
        masks = np.arange(size, dtype=np.int64)
        for i in range(n):
            low = masks[(masks >> i) & 1 == 0]
            if np.any(arr[low] & ~arr[low + (1 << i)]):
                raise NonMonotoneError(
                    f"repairing component {i} can flip the system from 1 to 0"
                )
        arr.flags.writeable = False
        self.n_components = n
        self._table = arr

    def evaluate(self, state: int) -> int:
        check_state(state, self.n_components)
        return int(self._table[state])

    def truth_table(self) -> np.ndarray:
        return self._table


class Network:
    """A named set of binary components tied together by a structure function."""

    def __init__(self, structure: StructureFunction, names=None,
                 cap: int = DEFAULT_COMPONENT_CAP):
        n = structure.n_components
        if n < 1:
            raise ValueError("a network needs at least one component")
        if n > cap:
            raise SizeCapError(
                f"{n} components exceed the cap of {cap}; pass cap= explicitly "
                "to analyze larger systems"
            )
        if names is None:
            names = tuple(f"c{i + 1}" for i in range(n))
        else:
            names = tuple(str(x) for x in names)
            if len(names) != n:
                raise ValueError(f"expected {n} names, got {len(names)}")
            if len(set(names)) != n:
                raise ValueError("component names must be distinct")
        self.structure = structure
        self.n_components = n
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    def index_of(self, name: str) -> int:
        return self._index[name]

    def evaluate(self, state: int) -> int:
        check_state(state, self.n_components)
        return self.structure.evaluate(state)

    def truth_table(self) -> np.ndarray:
        return self.structure.truth_table()

    def is_pure_series(self) -> bool:
        """True when the system works only with every component up."""
        return int(self.truth_table().sum()) == 1

    def is_pure_parallel(self) -> bool:
        """True when the system fails only with every component down."""
        table = self.truth_table()
        return int(table.size - table.sum()) == 1
