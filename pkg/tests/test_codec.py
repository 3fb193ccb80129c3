import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psmaca import codec
from psmaca.codec import StructureEncoding

structure_strings = st.text(alphabet="HEC", min_size=1, max_size=40)


class TestHydropathyScale:
    def test_bundled_scale_covers_alphabet(self):
        scale = codec.load_scale()
        assert scale.name == "kyte_doolittle"
        for aa in codec.AMINO_ACIDS:
            assert isinstance(scale[aa], float)

    def test_unknown_scale_name(self):
        with pytest.raises(ValueError):
            codec.load_scale("no_such_scale")

    def test_x_maps_to_zero(self):
        assert codec.hydropathy_encode("XXX") == [0.0, 0.0, 0.0]

    def test_isoleucine_value(self):
        assert codec.hydropathy_encode("I") == [4.5]

    def test_length_preserved(self):
        rng = random.Random(0)
        for _ in range(20):
            seq = "".join(rng.choice(codec.AMINO_ACIDS)
                          for _ in range(rng.randint(1, 50)))
            assert len(codec.hydropathy_encode(seq)) == len(seq)

    def test_illegal_residue(self):
        with pytest.raises(ValueError, match="position 2"):
            codec.hydropathy_encode("MF1")


class TestStructureEncode:
    def test_hec(self):
        assert codec.structure_encode("HEC") == [200.0, 600.0, 800.0]

    def test_all_helix(self):
        assert codec.structure_encode("HHHH") == [200.0] * 4

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            codec.structure_encode("")

    def test_illegal_label(self):
        with pytest.raises(ValueError):
            codec.structure_encode("HQC")

    def test_custom_encoding(self):
        enc = StructureEncoding(100.0, 300.0, 500.0)
        assert codec.structure_encode("HEC", enc) == [100.0, 300.0, 500.0]

    def test_degenerate_encoding_rejected(self):
        with pytest.raises(ValueError):
            StructureEncoding(200.0, 200.0, 800.0)


class TestStructureDecode:
    @pytest.mark.parametrize("value,label", [(100, "H"), (700, "E"), (400, "C"),
                                             (0, "H"), (200, "H"), (600, "E"),
                                             (-50, "C"), (900, "C")])
    def test_paper_bands(self, value, label):
        assert codec.structure_decode([value], "paper_bands") == label

    def test_band_conflict_at_coil_value(self):
        # 800 is both the coil code and the strand band edge; the two
        # readings disagree there by design
        assert codec.structure_decode([800], "paper_bands") == "E"
        assert codec.structure_decode([800], "nearest_centroid") == "C"

    def test_nearest_centroid_ties_go_low(self):
        # 400 is equidistant from 200 and 600
        assert codec.structure_decode([400], "nearest_centroid") == "H"
        assert codec.structure_decode([700], "nearest_centroid") in "EC"

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            codec.structure_decode([float("nan")])
        with pytest.raises(ValueError):
            codec.structure_decode([float("inf")], "paper_bands")

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            codec.structure_decode([100], "bands")

    @given(structure_strings)
    @settings(max_examples=200, deadline=None)
    def test_nearest_centroid_round_trip(self, s):
        assert codec.structure_decode(codec.structure_encode(s)) == s

    @given(structure_strings)
    @settings(max_examples=100, deadline=None)
    def test_paper_bands_round_trip_with_coil_at_400(self, s):
        # with coil moved out of the strand band the literal bands are exact
        enc = StructureEncoding(coil_value=400.0)
        encoded = codec.structure_encode(s, enc)
        assert codec.structure_decode(encoded, "paper_bands", enc) == s

    def test_paper_bands_round_trip_breaks_on_coil(self):
        assert codec.structure_decode(codec.structure_encode("C"),
                                      "paper_bands") == "E"


class TestWindowPatterns:
    def test_single_alanine(self):
        assert codec.window_patterns("A", 1) == [(0, 0, 0, 0, 0)]

    def test_single_cysteine(self):
        assert codec.window_patterns("C", 1) == [(0, 0, 0, 0, 1)]

    def test_pattern_count_and_width(self):
        pats = codec.window_patterns("MFRTKR", 3)
        assert len(pats) == 6
        assert all(len(p) == 15 for p in pats)

    def test_terminal_padding(self):
        pad = (1, 0, 1, 0, 0)  # code 20
        first = codec.window_patterns("AC", 3)[0]
        assert first[:5] == pad
        assert first[5:10] == (0, 0, 0, 0, 0)  # A
        assert first[10:] == (0, 0, 0, 0, 1)  # C

    def test_x_uses_pad_code(self):
        assert codec.window_patterns("X", 1) == [(1, 0, 1, 0, 0)]

    def test_even_window_rejected(self):
        with pytest.raises(ValueError):
            codec.window_patterns("ACD", 2)

    def test_locality(self):
        a = codec.window_patterns("ACDEF", 3)
        b = codec.window_patterns("ACDEW", 3)
        # positions whose window excludes the changed tail are identical
        assert a[:3] == b[:3]
