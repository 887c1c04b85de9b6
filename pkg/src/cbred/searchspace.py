"""NB201-style cell search space: enumeration, deduplication, MAC cost model.

A cell is a fixed 4-node DAG (node 0 = input, node 3 = output) whose six
edges each carry one of five kernel labels. The edge order is fixed as
(0->1), (0->2), (1->2), (0->3), (1->3), (2->3), matching the canonical
string grouping ``|op~0|+|op~0|op~1|+|op~0|op~1|op~2|``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import IntEnum

from .errors import InvalidInput

NUM_EDGES = 6
NUM_NODES = 4

# (source, target) per edge index; targets grouped ascending.
EDGES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3))


class OpKind(IntEnum):
    """Kernel labels. Integer codes are stable and used in serialization."""

    NONE = 0        # zeroize: outputs a zero tensor
    SKIP = 1        # identity forwarding
    CONV1X1 = 2
    CONV3X3 = 3
    AVGPOOL3X3 = 4


OP_NAMES: dict[OpKind, str] = {
    OpKind.NONE: "none",
    OpKind.SKIP: "skip_connect",
    OpKind.CONV1X1: "nor_conv_1x1",
    OpKind.CONV3X3: "nor_conv_3x3",
    OpKind.AVGPOOL3X3: "avg_pool_3x3",
}
OP_BY_NAME: dict[str, OpKind] = {v: k for k, v in OP_NAMES.items()}

ALL_OPS: frozenset[OpKind] = frozenset(OpKind)

SPACE_SIZE = len(OpKind) ** NUM_EDGES  # 15625


@dataclass(frozen=True)
class CellSpec:
    """One architecture: six edge labels over the fixed DAG."""

    ops: tuple[OpKind, ...]

    def __post_init__(self):
        if len(self.ops) != NUM_EDGES:
            raise InvalidInput(f"cell needs {NUM_EDGES} edge labels, got {len(self.ops)}")
        object.__setattr__(self, "ops", tuple(OpKind(o) for o in self.ops))

    @property
    def arch_id(self) -> int:
        return encode(self)

    def render(self) -> str:
        """Canonical string form, groups per target node, ``~k`` = source node."""
        parts = []
        e = 0
        for target in range(1, NUM_NODES):
            group = []
            for source in range(target):
                group.append(f"{OP_NAMES[self.ops[e]]}~{source}")
                e += 1
            parts.append("|" + "|".join(group) + "|")
        return "+".join(parts)


def parse(text: str) -> CellSpec:
    """Inverse of :meth:`CellSpec.render`."""
    groups = text.strip().split("+")
    if len(groups) != NUM_NODES - 1:
        raise InvalidInput(f"expected {NUM_NODES - 1} node groups, got {len(groups)}")
    ops: list[OpKind] = []
    for target, group in enumerate(groups, start=1):
        if not (group.startswith("|") and group.endswith("|")):
            raise InvalidInput(f"malformed group {group!r}")
        entries = group[1:-1].split("|")
        if len(entries) != target:
            raise InvalidInput(f"group for node {target} needs {target} entries")
        for source, entry in enumerate(entries):
            name, sep, src = entry.partition("~")
            if not sep or src != str(source):
                raise InvalidInput(f"bad source tag in {entry!r}, expected ~{source}")
            if name not in OP_BY_NAME:
                raise InvalidInput(f"unknown op name {name!r}")
            ops.append(OP_BY_NAME[name])
    return CellSpec(tuple(ops))


def encode(cell: CellSpec) -> int:
    """Base-5 positional index; ops[0] is the most significant digit."""
    index = 0
    for op in cell.ops:
        index = index * len(OpKind) + int(op)
    return index


def decode(index: int) -> CellSpec:
    if not 0 <= index < SPACE_SIZE:
        raise InvalidInput(f"arch id {index} outside [0, {SPACE_SIZE})")
    digits = []
    for _ in range(NUM_EDGES):
        index, d = divmod(index, len(OpKind))
        digits.append(OpKind(d))
    return CellSpec(tuple(reversed(digits)))


@dataclass(frozen=True)
class MacroSkeleton:
    """Macro network layout used for MAC accounting (NB201 defaults)."""

    stem_channels: int = 16
    cells_per_stage: int = 5
    stage_channels: tuple[int, ...] = (16, 32, 64)
    input_resolution: int = 32
    num_classes: int = 100
    in_channels: int = 3

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.stage_channels, self.stage_channels[1:])):
            raise InvalidInput("stage_channels must be strictly increasing")
        if min(self.stem_channels, self.cells_per_stage, self.input_resolution,
               self.num_classes, self.in_channels) < 1:
            raise InvalidInput("all skeleton counts must be >= 1")


def enumerate_space(opset: set[OpKind] | frozenset[OpKind]) -> list[CellSpec]:
    """All |opset|^6 cells in ascending arch-id order."""
    if not opset:
        raise InvalidInput("opset must be nonempty")
    codes = sorted(OpKind(o) for o in opset)
    return [CellSpec(ops) for ops in itertools.product(codes, repeat=NUM_EDGES)]


def _live_nodes(cell: CellSpec) -> list[bool]:
    # Node 0 is always live; node t is live iff it receives a non-NONE edge
    # from a live node. Topological order makes a single pass sufficient.
    live = [False] * NUM_NODES
    live[0] = True
    for e, (src, dst) in enumerate(EDGES):
        if cell.ops[e] != OpKind.NONE and live[src]:
            live[dst] = True
    return live


def reduce_cell(cell: CellSpec) -> CellSpec:
    """Rewrite every edge leaving a dead node to NONE.

    A dead node receives no information from the cell input, so kernels
    reading it only ever see zero tensors; relabeling them NONE preserves
    the computed function. The result is a fixed point of the rewrite.
    """
    live = _live_nodes(cell)
    ops = tuple(
        op if live[EDGES[e][0]] else OpKind.NONE for e, op in enumerate(cell.ops)
    )
    return cell if ops == cell.ops else CellSpec(ops)


def deduplicate(cells: list[CellSpec]) -> list[CellSpec]:
    """Merge cells that are identical after dead-edge rewriting.

    Each equivalence class keeps its lowest-arch-id member. Output is
    sorted by arch id; the operation is idempotent.
    """
    representative: dict[tuple[OpKind, ...], int] = {}
    by_id = {}
    for cell in cells:
        aid = encode(cell)
        by_id[aid] = cell
        key = reduce_cell(cell).ops
        cur = representative.get(key)
        if cur is None or aid < cur:
            representative[key] = aid
    return [by_id[aid] for aid in sorted(representative.values())]


def _conv_macs(kernel: int, c_in: int, c_out: int, resolution: int) -> int:
    return kernel * kernel * c_in * c_out * resolution * resolution


def edge_macs(op: OpKind, channels: int, resolution: int) -> int:
    """MACs of one cell edge. Pooling, skip and zeroize are multiply-free."""
    if op == OpKind.CONV1X1:
        return _conv_macs(1, channels, channels, resolution)
    if op == OpKind.CONV3X3:
        return _conv_macs(3, channels, channels, resolution)
    return 0


def mac_count(cell: CellSpec, skel: MacroSkeleton = MacroSkeleton()) -> int:
    """Total multiply-accumulate count of the macro network built from `cell`.

    Counts the stem conv, every cell replica, the stage-transition residual
    blocks (3x3 stride-2 conv + 3x3 conv + 1x1 shortcut), and the linear
    classifier. Batch-norm, ReLU and pooling contribute zero MACs.
    """
    res = skel.input_resolution
    total = _conv_macs(3, skel.in_channels, skel.stem_channels, res)
    for stage, channels in enumerate(skel.stage_channels):
        if stage > 0:
            c_prev = skel.stage_channels[stage - 1]
            res //= 2
            total += _conv_macs(3, c_prev, channels, res)      # stride-2 conv
            total += _conv_macs(3, channels, channels, res)    # second conv
            total += _conv_macs(1, c_prev, channels, res)      # shortcut
        cell_macs = sum(edge_macs(op, channels, res) for op in cell.ops)
        total += skel.cells_per_stage * cell_macs
    total += skel.stage_channels[-1] * skel.num_classes
    return total


def write_cell_list(cells: list[CellSpec], path) -> None:
    """One canonical cell string per line, UTF-8, LF-terminated."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for cell in cells:
            fh.write(cell.render() + "\n")


def read_cell_list(path) -> list[CellSpec]:
    with open(path, "r", encoding="utf-8") as fh:
        return [parse(line) for line in fh if line.strip()]
