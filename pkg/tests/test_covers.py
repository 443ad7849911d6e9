import pytest

from algebra.covers import (
    AdditiveCover,
    ac_compose,
    ac_fold,
    ac_identity,
    all_epi,
    check_g_components,
    check_m_P,
    check_multiplicative,
    check_product_cone,
    check_pullback_cones,
    cone_isomorphism,
    direct_product,
    exterior_multiplicative,
    m_P_functor,
    partition_rows,
    pull_back,
)
from models.covers import AcMorphism, AcObject
from models.errors import PreconditionError

MULTIPLICATIVE = ["poset2.cat", "chain3.cat", "grp_c2.cat", "klein.cat", "orbit_c2.cat"]


@pytest.mark.parametrize("name", MULTIPLICATIVE)
def test_multiplicative_fixtures(load_category, name):
    assert check_multiplicative(load_category(name)).ok


@pytest.mark.parametrize("name", MULTIPLICATIVE)
def test_every_pullback_is_universal(load_category, name):
    cat = load_category(name)
    cover = AdditiveCover(cat)
    for alpha in cat.ids:
        for beta in cat.into(cat.dst(alpha)):
            cone = pull_back(cat, alpha, beta, cover, check=False)
            assert check_pullback_cones(cat, alpha, beta, cone).ok


def test_idempotent_is_no_epimorphism(load_category):
    report = check_multiplicative(load_category("monoid.cat"))
    assert report.kinds() == ["epi"]
    assert not all_epi(load_category("monoid.cat"))
    assert all_epi(load_category("orbit_c2.cat"))


def test_partition_of_the_collapse(load_category):
    cat = load_category("orbit_c2.cat")
    rows = [row for row in partition_rows(cat) if row["alpha"] == 2]
    assert [row["classes"] for row in rows] == [2, 2]
    assert all(not row["uncovered"] and not row["overlaps"] for row in rows)


def test_uncovered_and_overlapping_pieces_are_reported(load_category):
    cat = load_category("orbit_c2.cat")
    row = next(row for row in partition_rows(cat) if cat.hom(row["T"], row["Q"]))
    beta = cat.hom(row["T"], row["Q"])[0]
    broken = {**row, "uncovered": (beta,), "overlaps": ((beta, (row["alpha"], row["alpha"])),)}
    report = check_multiplicative(cat, [broken])
    assert report.kinds() == ["cover", "disjoint"]
    assert all(f"β={beta}" in violation.witness for violation in report.violations)


@pytest.mark.parametrize(
    "name, left, right, terms",
    [
        ("grp_c2.cat", "o", "o", 2),
        ("klein.cat", "o", "o", 4),
        ("orbit_c2.cat", "1", "1", 2),
        ("orbit_c2.cat", "1", "P", 1),
        ("orbit_c2.cat", "P", "P", 1),
        ("poset2.cat", "a", "b", 1),
    ],
)
def test_direct_products(load_category, name, left, right, terms):
    cat = load_category(name)
    cone = direct_product(cat, left, right)
    assert len(cone.apex) == terms
    assert check_product_cone(cat, left, right, cone).ok


def test_products_in_a_poset_are_meets(load_category):
    cat = load_category("poset2.cat")
    assert direct_product(cat, "b", "a").apex.terms == ("a",)
    assert direct_product(cat, "b", "b").apex.terms == ("b",)


def test_pullback_of_the_collapse_with_itself(load_category):
    cat = load_category("orbit_c2.cat")
    cone = pull_back(cat, 2, 2)
    assert cone.apex.terms == ("1", "1")
    with pytest.raises(PreconditionError):
        pull_back(cat, 2, 0)


def test_cone_isomorphism_with_itself_is_the_identity(load_category):
    cat = load_category("orbit_c2.cat")
    cone = direct_product(cat, "1", "1")
    iso = cone_isomorphism(cat, cone, cone)
    assert iso == ac_identity(cat, cone.apex)


def test_ac_composition(load_category):
    cat = load_category("grp_c2.cat")
    swap = AcMorphism(dom=AcObject(terms=("o", "o")), cod=AcObject(terms=("o", "o")), index_map=(1, 0), components=(1, 1))
    assert ac_compose(cat, swap, swap) == ac_identity(cat, swap.dom)
    folded = ac_compose(cat, ac_fold(cat, "o", 2), swap)
    assert folded.index_map == (0, 0)
    assert folded.components == (1, 1)


def test_exterior_quotient_stays_multiplicative(load_category):
    assert exterior_multiplicative(load_category("cover2.cat")).ok


class TestProductWithP:
    def test_group(self, load_category):
        m = m_P_functor(load_category("grp_c2.cat"))
        assert m.final == "o"
        assert len(m.triples["o"]) == 2
        assert m(1).index_map == (1, 0)
        assert check_m_P(m).ok
        assert check_g_components(m).ok

    def test_orbit_category(self, load_category):
        m = m_P_functor(load_category("orbit_c2.cat"))
        assert m.final == "P"
        assert [len(m.obj(obj)) for obj in ("1", "P")] == [1, 1]
        assert check_m_P(m).ok

    def test_needs_a_final_object(self, load_category):
        with pytest.raises(PreconditionError):
            m_P_functor(load_category("chain3.cat").with_markings(sub_A=frozenset({0, 1, 2})))

    def test_needs_epimorphisms(self, load_category):
        with pytest.raises(PreconditionError):
            m_P_functor(load_category("monoid.cat").with_markings(sub_A=frozenset({0})))
