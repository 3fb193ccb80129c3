"""Encoders between amino-acid sequences, binary patterns, and numeric
signals.

Input encoding replaces each residue with its hydropathy value; output
encoding maps secondary structure H/E/C to 200/600/800.  Decoding supports
two readings: the literal bands ([0,200] -> H, [600,800] -> E, else C) and
nearest-centroid, the default, because coil's own code 800 sits inside the
strand band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

# Canonical residues in alphabetical order; the position is the residue's
# 5-bit code.  'X' (unknown) and window padding share code 20.
AMINO_ACIDS = "ACDEFGHIKLMNPQRSTVWY"
UNKNOWN_RESIDUE = "X"
PAD_CODE = 20
RESIDUE_CODE = {aa: i for i, aa in enumerate(AMINO_ACIDS)}

STRUCTURE_LABELS = "HEC"

DECODE_MODES = ("nearest_centroid", "paper_bands")


@dataclass(frozen=True)
class HydropathyScale:
    name: str
    values: dict[str, float]

    def __post_init__(self):
        missing = [aa for aa in AMINO_ACIDS if aa not in self.values]
        if missing:
            raise ValueError(f"scale {self.name!r} missing residues {missing}")

    def __getitem__(self, residue: str) -> float:
        if residue == UNKNOWN_RESIDUE:
            return 0.0
        if residue not in self.values:
            raise KeyError(f"residue {residue!r} not in scale {self.name!r}")
        return self.values[residue]


def load_scale(name: str = "kyte_doolittle") -> HydropathyScale:
    """Load a bundled hydropathy scale TSV (residue letter, value)."""
    try:
        text = (resources.files("psmaca") / "data" / f"{name}.tsv").read_text()
    except FileNotFoundError:
        raise ValueError(f"unknown hydropathy scale {name!r}") from None
    values = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        residue, value = line.split("\t")
        values[residue] = float(value)
    return HydropathyScale(name, values)


def check_sequence(seq: str) -> str:
    if not seq:
        raise ValueError("amino-acid sequence must be non-empty")
    for i, aa in enumerate(seq):
        if aa not in RESIDUE_CODE and aa != UNKNOWN_RESIDUE:
            raise ValueError(f"illegal residue {aa!r} at position {i}")
    return seq


def check_structure(s: str) -> str:
    if not s:
        raise ValueError("structure string must be non-empty")
    for i, lab in enumerate(s):
        if lab not in STRUCTURE_LABELS:
            raise ValueError(f"illegal structure label {lab!r} at position {i}")
    return s


def hydropathy_encode(seq: str, scale: HydropathyScale | None = None) -> list[float]:
    """One hydropathy value per residue; 'X' encodes as 0.0."""
    scale = scale or load_scale()
    return [scale[aa] for aa in check_sequence(seq)]


@dataclass(frozen=True)
class StructureEncoding:
    helix_value: float = 200.0
    strand_value: float = 600.0
    coil_value: float = 800.0

    def __post_init__(self):
        if len({self.helix_value, self.strand_value, self.coil_value}) != 3:
            raise ValueError("structure code values must be distinct")

    def value_of(self, label: str) -> float:
        return {"H": self.helix_value,
                "E": self.strand_value,
                "C": self.coil_value}[label]


def structure_encode(s: str, enc: StructureEncoding | None = None) -> list[float]:
    enc = enc or StructureEncoding()
    return [enc.value_of(lab) for lab in check_structure(s)]


def structure_decode(values, mode: str = "nearest_centroid",
                     enc: StructureEncoding | None = None) -> str:
    """Decode a numeric trace back to H/E/C.

    paper_bands: v in [0, helix] -> H, v in [strand, coil] -> E, else C.
    nearest_centroid: label of the closest code value, ties to the lower one.
    """
    enc = enc or StructureEncoding()
    values = list(values)
    if not values:
        raise ValueError("signal must be non-empty")
    if mode not in DECODE_MODES:
        raise ValueError(f"mode must be one of {DECODE_MODES}, got {mode!r}")
    centroids = sorted(
        [(enc.helix_value, "H"), (enc.strand_value, "E"), (enc.coil_value, "C")]
    )
    out = []
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite trace value {v!r}")
        if mode == "paper_bands":
            # strand band top stays at the coil code only while coil sits
            # above strand, as in the published 200/600/800 assignment
            strand_top = max(enc.strand_value, enc.coil_value)
            if 0 <= v <= enc.helix_value:
                out.append("H")
            elif enc.strand_value <= v <= strand_top:
                out.append("E")
            else:
                out.append("C")
        else:
            _, label = min(centroids, key=lambda c: (abs(v - c[0]), c[0]))
            out.append(label)
    return "".join(out)


def residue_code_bits(aa: str) -> tuple[int, ...]:
    code = RESIDUE_CODE.get(aa, PAD_CODE)
    return tuple((code >> (4 - i)) & 1 for i in range(5))


def window_patterns(seq: str, w: int) -> list[tuple[int, ...]]:
    """One 5w-bit pattern per residue: 5-bit residue codes over the window
    centered at the residue, terminal overhang padded with code 20."""
    if w < 1 or w % 2 == 0:
        raise ValueError(f"window size must be odd and >= 1, got {w}")
    check_sequence(seq)
    half = w // 2
    patterns = []
    for i in range(len(seq)):
        bits: list[int] = []
        for j in range(i - half, i + half + 1):
            aa = seq[j] if 0 <= j < len(seq) else None
            bits.extend(residue_code_bits(aa) if aa else residue_code_bits("X"))
        patterns.append(tuple(bits))
    return patterns
