"""MACA-style K-class pattern classifier.

A dependency string (a concatenation of nonzero dependency vectors) maps an
n-bit pattern to an m-bit basin signature: one parity bit per segment.  The
2^m signatures act as attractor basins; labeling each basin by its majority
class gives a classifier, and recursive partitioning of impure basins gives
the tree classifier.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

Bits = tuple[int, ...]


def dv_is_valid(bits) -> bool:
    """A dependency vector is valid iff it has at least one 1 bit; an
    all-zero vector would collapse its two basins into one."""
    bits = tuple(bits)
    if len(bits) == 0:
        raise ValueError("dependency vector must be non-empty")
    return any(b == 1 for b in bits)


@dataclass(frozen=True)
class DependencyString:
    """Ordered nonzero dependency vectors covering an n-bit pattern."""

    segments: tuple[Bits, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("dependency string needs at least one segment")
        for seg in self.segments:
            if not dv_is_valid(seg):
                raise ValueError(f"invalid (all-zero) dependency vector {seg}")

    @property
    def n(self) -> int:
        return sum(len(s) for s in self.segments)

    @property
    def m(self) -> int:
        return len(self.segments)

    def bit_strings(self) -> list[str]:
        return ["".join(str(b) for b in seg) for seg in self.segments]

    @classmethod
    def from_bit_strings(cls, strings) -> "DependencyString":
        return cls(tuple(tuple(int(c) for c in s) for s in strings))


def basin_signature(ds: DependencyString, pattern) -> Bits:
    """Signature bit j = parity of (segment j AND the matching pattern slice)."""
    pattern = tuple(pattern)
    if len(pattern) != ds.n:
        raise ValueError(
            f"pattern length {len(pattern)} != dependency string length {ds.n}")
    sig = []
    pos = 0
    for seg in ds.segments:
        chunk = pattern[pos:pos + len(seg)]
        sig.append(sum(d & p for d, p in zip(seg, chunk)) & 1)
        pos += len(seg)
    return tuple(sig)


@dataclass(frozen=True)
class LabeledPattern:
    bits: Bits
    label: str


def distribute(ds: DependencyString, patterns) -> dict[Bits, list[LabeledPattern]]:
    """Bucket patterns by basin signature; every pattern lands in exactly
    one bucket."""
    buckets: dict[Bits, list[LabeledPattern]] = {}
    for p in patterns:
        buckets.setdefault(basin_signature(ds, p.bits), []).append(p)
    return buckets


def majority_label(patterns) -> str:
    """Most frequent label; ties broken by the smallest label."""
    counts: dict[str, int] = {}
    for p in patterns:
        counts[p.label] = counts.get(p.label, 0) + 1
    return min(counts, key=lambda lab: (-counts[lab], lab))


def label_basins(distribution: dict[Bits, list[LabeledPattern]]) -> dict[Bits, str]:
    """Label each basin with its bucket's majority class."""
    return {sig: majority_label(bucket) for sig, bucket in distribution.items()}


@dataclass(frozen=True)
class Maca:
    ds: DependencyString
    basin_labels: dict[Bits, str]


@dataclass(frozen=True)
class TreeNode:
    """Internal nodes carry a dependency string and children keyed by
    signature; leaves carry only a label.  `majority` is the fallback for
    signatures never seen in training."""

    label: str
    ds: DependencyString | None = None
    children: dict[Bits, "TreeNode"] = field(default_factory=dict)

    @property
    def is_leaf(self) -> bool:
        return self.ds is None


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int = 8
    min_samples: int = 2
    population_size: int = 30
    generations: int = 40
    crossover_rate: float = 0.9
    mutation_rate: float = 0.02
    elitism_count: int = 2
    # GA restarts at a node whose best split leaves everything in one basin
    split_retries: int = 5


@dataclass(frozen=True)
class PsmacaTree:
    root: TreeNode
    n: int
    config: TreeConfig


def _check_training(training: list[LabeledPattern]) -> int:
    if not training:
        raise ValueError("training set must be non-empty")
    n = len(training[0].bits)
    for p in training:
        if len(p.bits) != n:
            raise ValueError("training patterns must share one length")
    return n


def build_tree(training, config: TreeConfig | None = None,
               rng_seed: int = 0) -> PsmacaTree:
    """Recursively partition the training set.

    At each impure node a GA evolves a dependency string with
    m = ceil(log2 K') segments for the node's K' classes; pure buckets
    become leaves, impure ones recurse until max_depth or min_samples.
    """
    from . import ga  # deferred: ga imports this module's types

    config = config or TreeConfig()
    training = list(training)
    n = _check_training(training)
    rng = random.Random(rng_seed)

    ga_template = dict(
        population_size=config.population_size,
        generations=config.generations,
        crossover_rate=config.crossover_rate,
        mutation_rate=config.mutation_rate,
        elitism_count=config.elitism_count,
    )

    def grow(patterns: list[LabeledPattern], depth: int) -> TreeNode:
        majority = majority_label(patterns)
        classes = {p.label for p in patterns}
        if len(classes) == 1:
            return TreeNode(label=majority)
        if depth >= config.max_depth or len(patterns) < config.min_samples:
            return TreeNode(label=majority)

        m = min(max(1, math.ceil(math.log2(len(classes)))), n)
        buckets = None
        best = None
        for _ in range(config.split_retries):
            cfg = ga.GaConfig(rng_seed=rng.getrandbits(32), **ga_template)
            best, _ = ga.evolve_maca(patterns, n, m, cfg)
            candidate = distribute(best.classifier1, patterns)
            if len(candidate) > 1:
                buckets = candidate
                break
        if buckets is None:
            # no chromosome separated this bucket at all
            return TreeNode(label=majority)

        children = {
            sig: grow(bucket, depth + 1)
            for sig, bucket in sorted(buckets.items())
        }
        return TreeNode(label=majority, ds=best.classifier1, children=children)

    return PsmacaTree(root=grow(training, 0), n=n, config=config)


def classify(tree: PsmacaTree, pattern) -> str:
    """Walk signatures from the root to a leaf.  An unseen signature at an
    internal node falls back to that node's majority label."""
    pattern = tuple(pattern)
    if len(pattern) != tree.n:
        raise ValueError(f"pattern length {len(pattern)} != tree width {tree.n}")
    node = tree.root
    while not node.is_leaf:
        sig = basin_signature(node.ds, pattern)
        child = node.children.get(sig)
        if child is None:
            return node.label
        node = child
    return node.label


def tree_to_dict(tree: PsmacaTree) -> dict:
    """JSON-ready form of a tree (see harness docs for the model schema)."""

    def node_to_dict(node: TreeNode) -> dict:
        if node.is_leaf:
            return {"label": node.label}
        return {
            "label": node.label,
            "ds": node.ds.bit_strings(),
            "children": {
                "".join(str(b) for b in sig): node_to_dict(child)
                for sig, child in sorted(node.children.items())
            },
        }

    cfg = tree.config
    return {
        "n": tree.n,
        "config": {
            "max_depth": cfg.max_depth,
            "min_samples": cfg.min_samples,
            "population_size": cfg.population_size,
            "generations": cfg.generations,
            "crossover_rate": cfg.crossover_rate,
            "mutation_rate": cfg.mutation_rate,
            "elitism_count": cfg.elitism_count,
            "split_retries": cfg.split_retries,
        },
        "root": node_to_dict(tree.root),
    }


def tree_from_dict(doc: dict) -> PsmacaTree:
    def node_from_dict(d: dict) -> TreeNode:
        if "ds" not in d:
            return TreeNode(label=d["label"])
        children = {
            tuple(int(c) for c in sig): node_from_dict(child)
            for sig, child in d["children"].items()
        }
        return TreeNode(
            label=d["label"],
            ds=DependencyString.from_bit_strings(d["ds"]),
            children=children,
        )

    return PsmacaTree(
        root=node_from_dict(doc["root"]),
        n=doc["n"],
        config=TreeConfig(**doc["config"]),
    )
