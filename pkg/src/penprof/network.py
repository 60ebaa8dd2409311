"""Directed signed signaling network model and file ingestion.

A network is a set of gene/protein symbols plus directed edges carrying an
activation (+1) or inhibition (-1) sign. Symbols are interned to dense
integer node ids (sorted symbol order, so equal symbol sets always produce
equal ids). Edges are deduplicated per (src, dst, sign) triple and stored in
canonical sorted order, which makes the content digest and every downstream
computation reproducible.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError


class EdgeSign(enum.IntEnum):
    ACTIVATION = 1
    INHIBITION = -1


@dataclass(frozen=True)
class LoadStats:
    """Counts of rows handled specially during ingestion."""

    rows_total: int = 0
    neutral_dropped: int = 0
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0


class SignalingNetwork:
    """Immutable directed signed graph with interned node symbols."""

    def __init__(self, symbols, edge_array, sign_array, stats=None):
        self._symbols = tuple(symbols)
        self._index = {s: i for i, s in enumerate(self._symbols)}
        self._edges = np.asarray(edge_array, dtype=np.int64).reshape(-1, 2)
        self._signs = np.asarray(sign_array, dtype=np.int8).reshape(-1)
        if self._edges.shape[0] != self._signs.shape[0]:
            raise ValidationError("edge and sign arrays disagree in length")
        self.stats = stats if stats is not None else LoadStats()
        self._build_adjacency()
        self._digest = None

    def _build_adjacency(self):
        n, e = self.n, self.e
        src = self._edges[:, 0]
        dst = self._edges[:, 1]
        # Edges are already sorted by (src, dst, sign), so out-lists are the
        # canonical order segments of the edge array.
        self.out_indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self.out_indptr, src + 1, 1)
        np.cumsum(self.out_indptr, out=self.out_indptr)
        self.out_targets = dst.copy()
        self.out_signs = self._signs.copy()

        order = np.lexsort((src, dst))
        self.in_indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self.in_indptr, dst + 1, 1)
        np.cumsum(self.in_indptr, out=self.in_indptr)
        self.in_sources = src[order]

        self.out_degree = np.diff(self.out_indptr)
        assert int(self.out_degree.sum()) == e

    @property
    def n(self) -> int:
        return len(self._symbols)

    @property
    def e(self) -> int:
        return self._edges.shape[0]

    @property
    def symbols(self) -> tuple[str, ...]:
        return self._symbols

    @property
    def edges(self) -> np.ndarray:
        return self._edges

    @property
    def signs(self) -> np.ndarray:
        return self._signs

    def index_of(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise ValidationError(f"unknown node symbol: {symbol!r}") from None

    def has_symbol(self, symbol: str) -> bool:
        return symbol in self._index

    def symbol_of(self, node_id: int) -> str:
        return self._symbols[node_id]

    def out_neighbors(self, u: int) -> np.ndarray:
        return self.out_targets[self.out_indptr[u]:self.out_indptr[u + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        return self.in_sources[self.in_indptr[v]:self.in_indptr[v + 1]]

    def ordered_pairs(self) -> set[tuple[int, int]]:
        """Distinct (src, dst) pairs that carry at least one edge."""
        return {(int(s), int(d)) for s, d in self._edges}

    @property
    def digest(self) -> str:
        """SHA-256 over the canonical serialization (symbols + sorted edges)."""
        if self._digest is None:
            h = hashlib.sha256()
            for s in self._symbols:
                h.update(b"node\t" + s.encode("utf-8") + b"\n")
            for (u, v), g in zip(self._edges, self._signs):
                h.update(f"edge\t{u}\t{v}\t{g}\n".encode("utf-8"))
            self._digest = h.hexdigest()
        return self._digest

    @classmethod
    def from_edges(cls, triples, extra_symbols=(), stats=None):
        """Build a network from (src_symbol, dst_symbol, sign) triples.

        extra_symbols adds isolated nodes that carry no edge.
        """
        symbols = set(extra_symbols)
        for u, v, _ in triples:
            symbols.add(u)
            symbols.add(v)
        symbols = tuple(sorted(symbols))
        index = {s: i for i, s in enumerate(symbols)}
        seen = set()
        rows = []
        dupes = 0
        for u, v, g in triples:
            g = int(g)
            if g not in (1, -1):
                raise ValidationError(f"edge sign must be +1 or -1, got {g}")
            key = (index[u], index[v], g)
            if key in seen:
                dupes += 1
                continue
            seen.add(key)
            rows.append(key)
        rows.sort()
        if rows:
            arr = np.array(rows, dtype=np.int64)
            edge_array, sign_array = arr[:, :2], arr[:, 2]
        else:
            edge_array = np.empty((0, 2), dtype=np.int64)
            sign_array = np.empty((0,), dtype=np.int8)
        if stats is None:
            stats = LoadStats(rows_total=len(triples), duplicates_dropped=dupes)
        return cls(symbols, edge_array, sign_array, stats)

    def induced_subgraph(self, node_ids) -> "SignalingNetwork":
        """Vertex-induced subgraph on the given node ids.

        Nodes are re-interned; isolated members of node_ids are retained.
        """
        keep = sorted(set(int(v) for v in node_ids))
        if not keep:
            raise ValidationError("induced subgraph over an empty node set")
        keep_syms = [self._symbols[v] for v in keep]
        keep_set = set(keep)
        triples = [
            (self._symbols[u], self._symbols[v], int(g))
            for (u, v), g in zip(self._edges, self._signs)
            if u in keep_set and v in keep_set
        ]
        return SignalingNetwork.from_edges(triples, extra_symbols=keep_syms)

    def save_tsv(self, path) -> None:
        """Write the canonical edge list as src<TAB>dst<TAB>sign rows."""
        with open(path, "w", encoding="utf-8") as fh:
            for (u, v), g in zip(self._edges, self._signs):
                fh.write(f"{self._symbols[u]}\t{self._symbols[v]}\t{g:+d}\n")
            # Isolated nodes carry no edge row; emit them as comments so a
            # reload restores the same node set.
            deg = self.out_degree.copy()
            np.add.at(deg, self._edges[:, 1], 1)
            for i, s in enumerate(self._symbols):
                if deg[i] == 0:
                    fh.write(f"# node\t{s}\n")


def load_network(path, drop_neutral: bool = True) -> SignalingNetwork:
    """Parse a TSV edge list into a SignalingNetwork.

    Rows are src<TAB>dst<TAB>sign with sign in {+1, -1, 0}; 0 marks a neutral
    physical link. Neutral rows are dropped when drop_neutral is true and
    rejected otherwise (the in-memory model has no neutral variant). Lines
    starting with '#' and blank lines are skipped. Self-loops are dropped and
    counted in stats; exact duplicate rows collapse to one edge.
    """
    triples = []
    extra = []
    total = neutral = loops = 0
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.lstrip().startswith("#"):
                # "# node<TAB>SYM" comments preserve isolated nodes written
                # by save_tsv.
                parts = line.lstrip("# \t").split("\t")
                if len(parts) == 2 and parts[0] == "node":
                    extra.append(parts[1].strip())
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError(path, line_no, f"expected 3 tab-separated fields, got {len(parts)}")
            src, dst, sign_text = (p.strip() for p in parts)
            if not src or not dst:
                raise ParseError(path, line_no, "empty node symbol")
            try:
                sign = int(sign_text)
            except ValueError:
                raise ParseError(path, line_no, f"sign is not an integer: {sign_text!r}") from None
            total += 1
            if sign == 0:
                if not drop_neutral:
                    raise ParseError(path, line_no, "neutral edge (sign 0) present with drop_neutral=False")
                neutral += 1
                continue
            if sign not in (1, -1):
                raise ParseError(path, line_no, f"sign must be one of +1, -1, 0, got {sign}")
            if src == dst:
                loops += 1
                continue
            triples.append((src, dst, sign))
    if not triples:
        raise ValidationError(f"{path}: no edges retained after filtering")
    net = SignalingNetwork.from_edges(triples, extra_symbols=extra)
    dupes = net.stats.duplicates_dropped
    net.stats = LoadStats(
        rows_total=total,
        neutral_dropped=neutral,
        self_loops_dropped=loops,
        duplicates_dropped=dupes,
    )
    return net


@dataclass(frozen=True)
class AnnotationSets:
    """Oncogene and drug-target annotations resolved to node ids."""

    oncogenes: frozenset[int]
    drugs: dict[str, frozenset[int]] = field(default_factory=dict)

    @property
    def targets(self) -> frozenset[int]:
        out = set()
        for t in self.drugs.values():
            out |= t
        return frozenset(out)


@dataclass(frozen=True)
class UnresolvedReport:
    """Symbols present in annotation files but absent from the network."""

    oncogenes: tuple[str, ...] = ()
    drug_targets: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "oncogenes": list(self.oncogenes),
            "drug_targets": {d: list(v) for d, v in sorted(self.drug_targets.items())},
        }


def load_symbol_list(network: SignalingNetwork, path):
    """One symbol per line; returns (resolved ids, unresolved symbols)."""
    resolved = []
    missing = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            sym = line.strip()
            if not sym or sym.startswith("#"):
                continue
            if network.has_symbol(sym):
                resolved.append(network.index_of(sym))
            else:
                missing.append(sym)
    return frozenset(resolved), tuple(sorted(set(missing)))


def load_annotations(network: SignalingNetwork, oncogene_path, drug_target_path):
    """Resolve annotation files against a network's symbol table.

    The oncogene file lists one symbol per line; the drug file is TSV rows of
    drug_id<TAB>target_symbol. Unresolved symbols are reported, never fatal;
    an empty resolved oncogene set or an empty overall target set is a
    validation error. Returns (AnnotationSets, UnresolvedReport).
    """
    onco, onco_missing = load_symbol_list(network, oncogene_path)

    drugs: dict[str, set[int]] = {}
    drug_missing: dict[str, list[str]] = {}
    with open(drug_target_path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(drug_target_path, line_no, f"expected 2 tab-separated fields, got {len(parts)}")
            drug, sym = parts[0].strip(), parts[1].strip()
            if not drug or not sym:
                raise ParseError(drug_target_path, line_no, "empty drug id or target symbol")
            drugs.setdefault(drug, set())
            if network.has_symbol(sym):
                drugs[drug].add(network.index_of(sym))
            else:
                drug_missing.setdefault(drug, []).append(sym)

    if not onco:
        raise ValidationError(f"no oncogene symbol from {oncogene_path} resolves to a network node")
    if not any(drugs.values()):
        raise ValidationError(f"no drug target symbol from {drug_target_path} resolves to a network node")

    ann = AnnotationSets(
        oncogenes=onco,
        drugs={d: frozenset(t) for d, t in sorted(drugs.items())},
    )
    report = UnresolvedReport(
        oncogenes=onco_missing,
        drug_targets={d: tuple(sorted(set(v))) for d, v in drug_missing.items()},
    )
    return ann, report


def project_annotations(ann: AnnotationSets, old: SignalingNetwork, new: SignalingNetwork) -> AnnotationSets:
    """Re-resolve annotations onto another network by symbol, dropping misses."""

    def remap(ids):
        kept = []
        for i in ids:
            sym = old.symbol_of(i)
            if new.has_symbol(sym):
                kept.append(new.index_of(sym))
        return frozenset(kept)

    return AnnotationSets(
        oncogenes=remap(ann.oncogenes),
        drugs={d: remap(t) for d, t in ann.drugs.items()},
    )
