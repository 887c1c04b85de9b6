"""Program form of a cell and the two feature vectors used for clustering.

The program form is a bipartite graph: memory nodes (tensor buffers, one
per DAG node) and kernel nodes (one per non-NONE edge), connected by read
edges (memory -> kernel) and write edges (kernel -> memory).

Two summaries are extracted per cell:

* frequency vector  -- how often each kernel label appears among the six
  edges (topology-agnostic);
* path vector       -- for each kernel label, the number of (path, edge)
  incidences over all live input->output paths. A NONE edge kills every
  path through it; a SKIP edge keeps the path live and counts as a SKIP
  incidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .searchspace import EDGES, NUM_EDGES, NUM_NODES, CellSpec, OpKind

# The fixed DAG has exactly four input->output node paths.
NODE_PATHS: tuple[tuple[int, ...], ...] = ((0, 3), (0, 1, 3), (0, 2, 3), (0, 1, 2, 3))

_EDGE_INDEX = {edge: i for i, edge in enumerate(EDGES)}

# Same paths as edge-index sequences: (3,), (0, 4), (1, 5), (0, 2, 5).
PATH_EDGES: tuple[tuple[int, ...], ...] = tuple(
    tuple(_EDGE_INDEX[(a, b)] for a, b in zip(p, p[1:])) for p in NODE_PATHS
)

FEATURE_DIM = len(OpKind)


@dataclass(frozen=True)
class CompGraph:
    """Bipartite memory/kernel program form of one cell."""

    memory_nodes: tuple[int, ...]                       # DAG node ids
    kernel_nodes: tuple[tuple[int, OpKind], ...]        # (edge index, label)
    reads: frozenset[tuple[int, int]]                   # (memory, kernel)
    writes: frozenset[tuple[int, int]]                  # (kernel, memory)

    @property
    def source(self) -> int:
        return self.memory_nodes[0]

    @property
    def sink(self) -> int:
        return self.memory_nodes[-1]


def build_graph(cell: CellSpec) -> CompGraph:
    """One memory node per DAG node, one kernel node per non-NONE edge."""
    kernels = []
    reads = set()
    writes = set()
    for e, (src, dst) in enumerate(EDGES):
        if cell.ops[e] == OpKind.NONE:
            continue
        kernels.append((e, cell.ops[e]))
        reads.add((src, e))
        writes.add((e, dst))
    return CompGraph(
        memory_nodes=tuple(range(NUM_NODES)),
        kernel_nodes=tuple(kernels),
        reads=frozenset(reads),
        writes=frozenset(writes),
    )


def freq_vector(cell: CellSpec) -> tuple[int, ...]:
    """Per-label edge counts; always sums to 6."""
    counts = [0] * FEATURE_DIM
    for op in cell.ops:
        counts[int(op)] += 1
    return tuple(counts)


def path_vector(cell: CellSpec) -> tuple[int, ...]:
    """Per-label (live path, edge) incidence counts.

    A path is live iff none of its edges is NONE, so the NONE component
    is structurally zero.
    """
    counts = [0] * FEATURE_DIM
    for edge_seq in PATH_EDGES:
        labels = [cell.ops[e] for e in edge_seq]
        if OpKind.NONE in labels:
            continue
        for op in labels:
            counts[int(op)] += 1
    return tuple(counts)


def path_vector_from_graph(graph: CompGraph) -> tuple[int, ...]:
    """Recompute the path vector by walking the program form itself.

    Enumerates memory-node paths source -> sink through read/write pairs;
    independent of the cell encoding, so it doubles as a cross-check for
    :func:`path_vector`.
    """
    kernels_from: dict[int, list[tuple[int, OpKind, int]]] = {}
    write_dst = {k: m for k, m in graph.writes}
    for mem, kern in graph.reads:
        label = dict(graph.kernel_nodes)[kern]
        kernels_from.setdefault(mem, []).append((kern, label, write_dst[kern]))

    counts = [0] * FEATURE_DIM

    def walk(mem: int, labels: list[OpKind]) -> None:
        if mem == graph.sink:
            for op in labels:
                counts[int(op)] += 1
            return
        for _, label, dst in kernels_from.get(mem, []):
            walk(dst, labels + [label])

    walk(graph.source, [])
    return tuple(counts)


def feature_matrix(cells: list[CellSpec]) -> tuple[np.ndarray, np.ndarray]:
    """Stacked (n, 5) frequency and path matrices for a list of cells."""
    freq = np.empty((len(cells), FEATURE_DIM), dtype=np.int64)
    path = np.empty((len(cells), FEATURE_DIM), dtype=np.int64)
    for i, cell in enumerate(cells):
        freq[i] = freq_vector(cell)
        path[i] = path_vector(cell)
    return freq, path


FEATURE_CSV_HEADER = "arch_id,f_none,f_skip,f_c1,f_c3,f_ap,p_none,p_skip,p_c1,p_c3,p_ap"


def write_feature_csv(cells: list[CellSpec], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(FEATURE_CSV_HEADER + "\n")
        for cell in cells:
            row = (cell.arch_id, *freq_vector(cell), *path_vector(cell))
            fh.write(",".join(str(v) for v in row) + "\n")
