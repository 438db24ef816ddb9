import io
from typing import Dict, Iterable, List, Optional, TextIO, Tuple

import structlog

from kgcore.hypergraph import Hypergraph
from kgcore.index import AuxNode, Branch, CoreSizeTable, IndexTree, LeafNode
from kgcore.models import (
    INDEX_MAGIC,
    INDEX_VERSION,
    FingerprintMismatchError,
    IndexFormatError,
    UnsupportedVersionError,
    Variant,
)

LOGGER = structlog.get_logger()


def _ids(values: Iterable[int]) -> str:
    ordered = sorted(values)
    return " ".join([str(len(ordered))] + [str(v) for v in ordered])


def dump_index(tree: IndexTree) -> str:
    lines: List[str] = [
        f"{INDEX_MAGIC} {INDEX_VERSION} {tree.variant.value} {tree.num_nodes} {tree.g_star} {tree.fingerprint or '-'}"
    ]
    for i, label in enumerate(tree.labels):
        lines.append(f"D {label} {i}")
    for g in sorted(tree.branches):
        branch = tree.branches[g]
        lines.append(f"B {g} {branch.k_max}")
        for leaf in branch.leaves:
            lines.append(f"L {leaf.k} {_ids(leaf.value)}")
        for leaf in branch.leaves:
            if leaf.aux is None:
                continue
            for d in leaf.aux.nonempty_depths():
                lines.append(f"A {leaf.k} {g} {d} {_ids(leaf.aux.depths[d])}")
    for g in sorted(tree.core_sizes.sizes):
        sizes = tree.core_sizes.sizes[g]
        lines.append(" ".join(["S", str(g), str(len(sizes))] + [str(s) for s in sizes]))
    return "".join(line + "\n" for line in lines)


def save_index(tree: IndexTree, sink: TextIO) -> None:
    sink.write(dump_index(tree))
    LOGGER.info("index_saved", variant=tree.variant.value, g_star=tree.g_star)


def save_index_file(tree: IndexTree, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        save_index(tree, f)


class _Reader:
    """Line cursor that remembers the byte offset of each line it hands out."""

    def __init__(self, text: str) -> None:
        self._lines: List[Tuple[int, str]] = []
        offset = 0
        for raw in text.splitlines(keepends=True):
            self._lines.append((offset, raw))
            offset += len(raw.encode("utf-8"))
        self._end = offset
        self._pos = 0

    def peek(self) -> Optional[str]:
        if self._pos >= len(self._lines):
            return None
        return self._lines[self._pos][1]

    def next(self, expected: str) -> Tuple[int, List[str]]:
        if self._pos >= len(self._lines):
            raise IndexFormatError(self._end, f"truncated file: expected {expected!r} record")
        offset, raw = self._lines[self._pos]
        self._pos += 1
        if not raw.endswith("\n"):
            raise IndexFormatError(offset, "truncated record (missing newline)")
        return offset, raw.split()

    def at_end(self) -> bool:
        return self._pos >= len(self._lines)

    def offset(self) -> int:
        if self._pos >= len(self._lines):
            return self._end
        return self._lines[self._pos][0]


def _int(token: str, offset: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise IndexFormatError(offset, f"expected integer, got {token!r}") from None


def _counted(tokens: List[str], start: int, offset: int, limit: int) -> List[int]:
    n = _int(tokens[start], offset)
    values = [_int(t, offset) for t in tokens[start + 1 :]]
    if len(values) != n:
        raise IndexFormatError(offset, f"declared {n} values, found {len(values)}")
    for v in values:
        if limit >= 0 and not 0 <= v < limit:
            raise IndexFormatError(offset, f"node id {v} out of range")
    return values


def _record(reader: _Reader, tag: str, min_tokens: int) -> Tuple[int, List[str]]:
    offset, tokens = reader.next(tag)
    if not tokens or tokens[0] != tag:
        raise IndexFormatError(offset, f"expected {tag!r} record, got {tokens[0] if tokens else 'blank line'!r}")
    if len(tokens) < min_tokens:
        raise IndexFormatError(offset, f"short {tag!r} record")
    return offset, tokens


def parse_index(text: str, graph: Optional[Hypergraph] = None) -> IndexTree:
    reader = _Reader(text)
    offset, header = reader.next("header")
    if len(header) < 5 or header[0] != INDEX_MAGIC:
        raise IndexFormatError(offset, "bad magic")
    version = _int(header[1], offset)
    if version != INDEX_VERSION:
        raise UnsupportedVersionError(offset, f"unsupported format version {version}")
    try:
        variant = Variant(header[2])
    except ValueError:
        raise IndexFormatError(offset, f"unknown variant {header[2]!r}") from None
    num_nodes = _int(header[3], offset)
    g_star = _int(header[4], offset)
    fingerprint = header[5] if len(header) > 5 and header[5] != "-" else ""

    if graph is not None and fingerprint and graph.fingerprint != fingerprint:
        raise FingerprintMismatchError(offset, "index was built from a different dataset")

    labels: List[str] = []
    for i in range(num_nodes):
        rec_offset, tokens = _record(reader, "D", 3)
        if _int(tokens[2], rec_offset) != i:
            raise IndexFormatError(rec_offset, f"dictionary out of order at id {i}")
        labels.append(tokens[1])

    branches: Dict[int, Branch] = {}
    pending_aux: List[Tuple[int, int, int, int, List[int]]] = []
    for expected_g in range(1, g_star + 1):
        rec_offset, tokens = _record(reader, "B", 3)
        g = _int(tokens[1], rec_offset)
        if g != expected_g:
            raise IndexFormatError(rec_offset, f"expected branch {expected_g}, got {g}")
        k_max = _int(tokens[2], rec_offset)
        branch = Branch(g=g)
        for expected_k in range(1, k_max + 1):
            leaf_offset, leaf_tokens = _record(reader, "L", 3)
            k = _int(leaf_tokens[1], leaf_offset)
            if k != expected_k:
                raise IndexFormatError(leaf_offset, f"expected leaf {expected_k}, got {k}")
            branch.leaves.append(LeafNode(k, g, set(_counted(leaf_tokens, 2, leaf_offset, num_nodes))))
        while (reader.peek() or "").startswith("A "):
            aux_offset, aux_tokens = _record(reader, "A", 5)
            ak, ag, d = (_int(t, aux_offset) for t in aux_tokens[1:4])
            if ag != g or not 1 <= ak <= k_max or d < 1:
                raise IndexFormatError(aux_offset, f"aux record ({ak},{ag}) depth {d} outside branch {g}")
            pending_aux.append((aux_offset, ak, ag, d, _counted(aux_tokens, 4, aux_offset, num_nodes)))
        branches[g] = branch

    sizes: Dict[int, List[int]] = {}
    for expected_g in range(1, g_star + 1):
        rec_offset, tokens = _record(reader, "S", 3)
        g = _int(tokens[1], rec_offset)
        if g != expected_g:
            raise IndexFormatError(rec_offset, f"expected size row {expected_g}, got {g}")
        sizes[g] = _counted(tokens, 2, rec_offset, -1)

    if not reader.at_end():
        raise IndexFormatError(reader.offset(), "unexpected trailing records")

    tree = IndexTree(
        variant=variant,
        branches=branches,
        core_sizes=CoreSizeTable(sizes=sizes),
        labels=labels,
        fingerprint=fingerprint,
    )
    for aux_offset, k, g, d, members in pending_aux:
        leaf = tree.leaf(k, g)
        if leaf.aux is None:
            leaf.aux = AuxNode(position=(k, g))
        if d in leaf.aux.depths:
            raise IndexFormatError(aux_offset, f"duplicate aux depth {d} at ({k},{g})")
        leaf.aux.depths[d] = set(members)
    tree.relink()
    return tree


def load_index(source: TextIO, graph: Optional[Hypergraph] = None) -> IndexTree:
    tree = parse_index(source.read(), graph)
    LOGGER.info("index_loaded", variant=tree.variant.value, g_star=tree.g_star)
    return tree


def load_index_file(path: str, graph: Optional[Hypergraph] = None) -> IndexTree:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return load_index(f, graph)


def recount_entries(text: str) -> int:
    """Stored node entries counted straight from serialized L and A records."""
    total = 0
    for line in io.StringIO(text):
        tokens = line.split()
        if not tokens:
            continue
        if tokens[0] == "L":
            total += int(tokens[2])
        elif tokens[0] == "A":
            total += int(tokens[4])
    return total
