"""Elementary 1-D cellular automaton engine.

Wolfram-numbered radius-1 binary rules, lattice evolution with null or
periodic boundaries, exhaustive state-transition graphs and attractor-basin
enumeration for small lattice widths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

Cells = tuple[int, ...]

BOUNDARIES = ("null", "periodic")

# Widths above this make the 2^n state-transition graph too big to enumerate.
MAX_STG_WIDTH = 20


@dataclass(frozen=True)
class RuleTable:
    """Outputs of an elementary rule, indexed by the neighborhood read as a
    3-bit number (left, center, right), i.e. outputs[0b111] down to
    outputs[0b000]."""

    outputs: Cells

    def __post_init__(self):
        if len(self.outputs) != 8 or any(b not in (0, 1) for b in self.outputs):
            raise ValueError("rule table needs exactly 8 binary outputs")


def rule_from_number(rule: int) -> RuleTable:
    """Decode a Wolfram rule number (0..255) into its lookup table.

    Bit b of the rule number is the output for neighborhood b; the naming
    convention reads neighborhoods from 111 (bit 7) down to 000 (bit 0).
    """
    if not 0 <= rule <= 255:
        raise ValueError(f"rule number must be in [0, 255], got {rule}")
    return RuleTable(tuple((rule >> b) & 1 for b in range(8)))


def rule_number(table: RuleTable) -> int:
    """Inverse of rule_from_number."""
    return sum(bit << b for b, bit in enumerate(table.outputs))


def _check_boundary(boundary: str) -> None:
    if boundary not in BOUNDARIES:
        raise ValueError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")


def step(cells: Cells, rule: RuleTable, boundary: str = "null") -> Cells:
    """Apply one synchronous update. Null boundary reads missing neighbors
    as 0; periodic wraps."""
    _check_boundary(boundary)
    n = len(cells)
    if n == 0:
        raise ValueError("configuration must have at least one cell")
    out = []
    for i in range(n):
        if boundary == "periodic":
            left = cells[(i - 1) % n]
            right = cells[(i + 1) % n]
        else:
            left = cells[i - 1] if i > 0 else 0
            right = cells[i + 1] if i < n - 1 else 0
        out.append(rule.outputs[(left << 2) | (cells[i] << 1) | right])
    return tuple(out)


def evolve(cells: Cells, rule: RuleTable, steps: int,
           boundary: str = "null") -> list[Cells]:
    """Iterate `step`, returning the trajectory [start, ..., after `steps`]."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    rows = [tuple(cells)]
    for _ in range(steps):
        rows.append(step(rows[-1], rule, boundary))
    return rows


def cells_to_int(cells: Cells) -> int:
    """Pack cells into an integer, leftmost cell as the most significant bit."""
    value = 0
    for bit in cells:
        value = (value << 1) | bit
    return value


def int_to_cells(value: int, n: int) -> Cells:
    return tuple((value >> (n - 1 - i)) & 1 for i in range(n))


@dataclass(frozen=True)
class StateTransitionGraph:
    """Deterministic successor map over all 2^n lattice states."""

    n: int
    successor: tuple[int, ...]

    def __post_init__(self):
        if len(self.successor) != 1 << self.n:
            raise ValueError("successor map must cover all 2^n states")


@dataclass(frozen=True)
class AttractorBasin:
    """One attractor cycle together with every state that flows into it."""

    attractor_cycle: tuple[int, ...]
    members: frozenset[int]


def state_transition_graph(rule: RuleTable, n: int,
                           boundary: str = "null") -> StateTransitionGraph:
    """Enumerate the successor of every n-cell state (n <= 20)."""
    if not 1 <= n <= MAX_STG_WIDTH:
        raise ValueError(f"width must be in [1, {MAX_STG_WIDTH}], got {n}")
    _check_boundary(boundary)
    succ = tuple(
        cells_to_int(step(int_to_cells(s, n), rule, boundary))
        for s in range(1 << n)
    )
    return StateTransitionGraph(n, succ)


def attractor_basins(graph: StateTransitionGraph) -> list[AttractorBasin]:
    """Partition the state space into attractor basins.

    Walks each unvisited state until it meets either its own path (a new
    cycle) or an already-classified state, then labels the whole path.
    Basins are returned ordered by their smallest cycle state.
    """
    total = 1 << graph.n
    basin_of = [-1] * total  # state -> basin index
    cycles: list[tuple[int, ...]] = []

    for start in range(total):
        if basin_of[start] != -1:
            continue
        path = []
        on_path = {}
        s = start
        while basin_of[s] == -1 and s not in on_path:
            on_path[s] = len(path)
            path.append(s)
            s = graph.successor[s]
        if basin_of[s] != -1:
            idx = basin_of[s]
        else:
            # new cycle: the path tail from the first revisit onward
            cycle = path[on_path[s]:]
            # canonical rotation: start at the smallest state
            k = cycle.index(min(cycle))
            cycles.append(tuple(cycle[k:] + cycle[:k]))
            idx = len(cycles) - 1
        for state in path:
            basin_of[state] = idx

    members: list[set[int]] = [set() for _ in cycles]
    for state, idx in enumerate(basin_of):
        members[idx].add(state)
    basins = [
        AttractorBasin(cycle, frozenset(member))
        for cycle, member in zip(cycles, members)
    ]
    basins.sort(key=lambda b: b.attractor_cycle[0])
    return basins


def format_trajectory(rows: Iterable[Cells]) -> str:
    """Render a trajectory as '0'/'1' text rows, one line per step."""
    return "\n".join("".join(str(b) for b in row) for row in rows)
