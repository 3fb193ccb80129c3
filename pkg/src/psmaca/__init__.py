"""PSMACA: MACA pattern classification and signal-domain protein
secondary-structure prediction."""

from . import ca, codec, dataio, ga, maca, pipeline  # noqa: F401

__version__ = "0.1.0"
