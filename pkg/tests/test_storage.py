import pytest

from algebra.categories import validate_category
from algebra.functors import validate_functor
from models.errors import InputError, ParseError
from models.storage import CategoryFile, FunctorFile, GroupFile
from tools.tidy_fixtures import tidy_dir

SMALL = """NAME S
OBJECTS a b
MORPHISMS
0 a a
1 b b
2 a b
IDENT
a 0
b 1
"""


class TestCategoryFile:
    def test_identity_composites_are_filled_in(self):
        cat = CategoryFile.parse(SMALL)
        assert cat.compose(2, 0) == 2
        assert cat.compose(1, 2) == 2
        assert validate_category(cat).ok

    def test_unknown_section_reports_its_line(self):
        with pytest.raises(ParseError) as info:
            CategoryFile.parse(SMALL + "BOGUS\n1 2 3\n", path="x.cat")
        assert info.value.line == 10
        assert "unknown section BOGUS" in str(info.value)
        assert str(info.value).startswith("x.cat:10:")

    def test_data_before_any_header(self):
        with pytest.raises(ParseError) as info:
            CategoryFile.parse("0 a a\n" + SMALL)
        assert info.value.line == 1

    def test_bad_integer(self):
        text = SMALL.replace("2 a b", "two a b")
        with pytest.raises(ParseError) as info:
            CategoryFile.parse(text)
        assert info.value.line == 6
        assert "expected an integer" in info.value.message

    def test_conflicting_composition(self):
        text = SMALL + "COMP\n2 0 2\n2 0 1\n"
        with pytest.raises(ParseError) as info:
            CategoryFile.parse(text)
        assert info.value.line == 12

    def test_duplicate_section(self):
        with pytest.raises(ParseError, match="appears twice"):
            CategoryFile.parse(SMALL + "IDENT\na 0\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            CategoryFile.read(tmp_path / "absent.cat")

    def test_invalid_utf8_reports_its_line(self, tmp_path):
        path = tmp_path / "bad.cat"
        path.write_bytes(b"NAME S\nOBJECTS a\xff\n")
        with pytest.raises(ParseError) as info:
            CategoryFile.read(path)
        assert info.value.line == 2
        assert "not valid UTF-8" in str(info.value)
        assert str(info.value).startswith(f"{path}:2:")

    def test_comments_are_ignored(self):
        cat = CategoryFile.parse("# a comment\n" + SMALL.replace("2 a b", "2 a b ab  # the arrow"))
        assert cat.label(2) == "ab"

    def test_interior_is_closed_under_composition(self, load_category):
        cat = load_category("cover2.cat")
        assert cat.interior("P") == frozenset({4, 5})
        assert cat.interior("1") == frozenset({0})

    @pytest.mark.parametrize("name", ["poset2.cat", "klein.cat", "cover2.cat", "orbit_c2.cat"])
    def test_canonical_text_reads_back(self, load_category, name):
        text = CategoryFile.dumps(load_category(name))
        assert CategoryFile.dumps(CategoryFile.parse(text)) == text

    def test_write_and_read(self, load_category, tmp_path):
        cat = load_category("grp_c2.cat")
        CategoryFile.write(tmp_path / "nested" / "c2.cat", cat)
        again = CategoryFile.read(tmp_path / "nested" / "c2.cat")
        assert again.a_morphisms == frozenset({0})
        assert again.ids == cat.ids


class TestFunctorFile:
    def test_category_is_resolved_next_to_the_file(self, load_functor):
        functor = load_functor("orbit_c2_regular.fun")
        assert functor.base.name == "O(C2)"
        assert functor(1).rows() == [[0, 1], [1, 0]]
        assert functor(2).rows() == [[1], [1]]
        assert functor(0).equals(functor(0).identity(functor.at("1")))

    def test_ring_line_and_r_literal(self, load_functor):
        functor = load_functor("klein_z2.fun")
        assert str(functor.ring) == "Zmod:2^1"
        assert functor.at("o").orders == (2,)

    def test_unlisted_morphism_between_different_modules(self, load_category):
        text = "MODULES\na : Z\nb : Z/2\n"
        with pytest.raises(InputError, match="morphism 2"):
            FunctorFile.parse(text, cat=load_category("poset2.cat"))

    def test_empty_map_is_zero(self, load_category):
        text = "MODULES\na : Z\nb : Z/2\nMAPS\n2 :\n"
        functor = FunctorFile.parse(text, cat=load_category("poset2.cat"))
        assert functor(2).is_zero()
        assert validate_functor(functor).ok

    def test_bad_matrix_reports_its_line(self, load_category):
        text = "MODULES\no : Z/4\nMAPS\n1 : 1 2\n"
        with pytest.raises(ParseError) as info:
            FunctorFile.parse(text, cat=load_category("grp_c2.cat"))
        assert info.value.line == 4

    def test_unknown_object(self, load_category):
        with pytest.raises(ParseError, match="unknown object q"):
            FunctorFile.parse("MODULES\nq : Z\n", cat=load_category("grp_c2.cat"))

    @pytest.mark.parametrize("name", ["c2_z4_sign.fun", "orbit_c2_regular.fun", "klein_z2.fun", "c2_bad.fun"])
    def test_canonical_text_reads_back(self, load_functor, name):
        functor = load_functor(name)
        text = FunctorFile.dumps(functor)
        again = FunctorFile.parse(text, cat=functor.base)
        assert FunctorFile.dumps(again) == text


class TestGroupFile:
    def test_regular_action(self, load_group):
        data = load_group("c3.grp")
        assert data.points == 3
        assert data.left[1] == (1, 2, 0)

    def test_explicit_action(self, load_group):
        data = load_group("c2_double.grp")
        assert data.points == 4
        assert data.right[1] == (1, 0, 3, 2)

    def test_missing_left_images(self):
        text = "TABLE\n0 1\n1 0\nP 0 1\nOMEGA 2\nLEFT\n0 : 0 1\n"
        with pytest.raises(ParseError, match="element 1"):
            GroupFile.parse(text)

    def test_table_must_be_a_group(self):
        with pytest.raises(ParseError):
            GroupFile.parse("TABLE\n0 1\n0 1\nP 0\nOMEGA regular\n")

    def test_canonical_text_reads_back(self, load_group):
        text = GroupFile.dumps(load_group("klein.grp"))
        assert GroupFile.dumps(GroupFile.parse(text)) == text


def test_tidy_is_a_fixed_point(fixture_dir, tmp_path):
    first = tidy_dir(fixture_dir, tmp_path)
    assert not first["size"].str.startswith("error").any()
    second = tidy_dir(tmp_path, tmp_path)
    assert not second["changed"].any()
    assert list(second["file"]) == list(first["file"])
