import pytest

from ratingkit import scales
from ratingkit.errors import CodeOutOfRange, UnknownGrade
from ratingkit.scales import Agency, ScaleKind

ALL_KINDS = list(ScaleKind)


class TestEncode:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_top_grade_is_code_1(self, kind):
        assert scales.encode("AAA", kind) == 1

    def test_bb_on_gradations(self):
        assert scales.encode("BB", ScaleKind.GRADATIONS18) == 12

    def test_ba2_equivalent_to_bb(self):
        # Ba2 and BB must land on the same gradation
        assert scales.encode("Ba2", ScaleKind.GRADATIONS18, Agency.MOODYS) == 12

    def test_unknown_grade(self):
        with pytest.raises(UnknownGrade):
            scales.encode("ZZZ", ScaleKind.CLASSES8)

    def test_moodys_symbol_rejected_as_sp(self):
        with pytest.raises(UnknownGrade):
            scales.encode("Ba2", ScaleKind.CLASSES8, Agency.SP)


class TestDecode:
    def test_top(self):
        assert scales.decode(1, ScaleKind.CLASSES8) == "AAA"

    def test_class_5_is_bb(self):
        assert scales.decode(5, ScaleKind.CLASSES8) == "BB"

    def test_mixed_bottom_bucket(self):
        assert scales.decode(12, ScaleKind.MIXED12) == "B-and-below"

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_out_of_range(self, kind):
        with pytest.raises(CodeOutOfRange):
            scales.decode(0, kind)
        with pytest.raises(CodeOutOfRange):
            scales.decode(scales.n_codes(kind) + 1, kind)


class TestCrossmap:
    def test_top_to_top(self):
        assert scales.crossmap_moodys_to_sp("Aaa") == "AAA"

    def test_ba2(self):
        assert scales.crossmap_moodys_to_sp("Ba2") == "BB"

    def test_ba3_one_notch_below(self):
        assert scales.crossmap_moodys_to_sp("Ba3") == "BB-"

    def test_unknown(self):
        with pytest.raises(UnknownGrade):
            scales.crossmap_moodys_to_sp("BB")

    def test_rank_preserving(self):
        ranks = [
            scales.SP_LADDER.index(scales.crossmap_moodys_to_sp(m))
            for m in scales.MOODYS_LADDER
        ]
        assert ranks == sorted(ranks)
        assert len(set(ranks)) == len(ranks)


class TestInvariants:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_encode_decode_identity(self, kind):
        for code in range(1, scales.n_codes(kind) + 1):
            assert scales.encode(scales.decode(code, kind), kind) == code

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_monotone_over_ladder(self, kind):
        codes = [scales.encode(g, kind) for g in scales.SP_LADDER]
        assert codes == sorted(codes)

    @pytest.mark.parametrize("kind,expected", [
        (ScaleKind.CLASSES8, 8),
        (ScaleKind.GRADATIONS18, 18),
        (ScaleKind.MIXED12, 12),
    ])
    def test_cardinality(self, kind, expected):
        codes = {scales.encode(g, kind) for g in scales.SP_LADDER}
        assert codes == set(range(1, expected + 1))

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_moodys_agree_with_sp_equivalents(self, kind):
        for m in scales.MOODYS_LADDER:
            sp = scales.crossmap_moodys_to_sp(m)
            assert scales.encode(m, kind, Agency.MOODYS) == scales.encode(sp, kind)


def test_scale_table_csv():
    text = scales.scale_table_csv()
    lines = text.splitlines()
    assert lines[0] == "kind,code,representative,members"
    assert len(lines) == 1 + 8 + 18 + 12
    assert text.endswith("\n")
    assert "classes8,5,BB,BB+|BB|BB-" in lines
