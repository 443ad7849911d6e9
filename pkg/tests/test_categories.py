import pytest

from algebra.categories import (
    arrows_to_final,
    check_a_category,
    check_cointerior,
    check_endomorphism_groups,
    check_interior,
    check_quotient_functor,
    co_exterior_quotient,
    exterior_quotient,
    factorization,
    has_final_object,
    is_ordered,
    opposite,
    ordered_violation,
    semidirect_product,
    validate_category,
    validate_markings,
)
from models.categories import SetFunctor
from models.errors import PreconditionError

VALID = ["poset2.cat", "chain3.cat", "grp_c2.cat", "klein.cat", "monoid.cat", "cover2.cat", "orbit_c2.cat"]


@pytest.mark.parametrize("name", VALID)
def test_fixture_categories_are_valid(load_category, name):
    cat = load_category(name)
    assert validate_category(cat).ok
    assert validate_markings(cat).ok


def test_corrupted_composition_breaks_associativity(load_category):
    report = validate_category(load_category("klein_bad_comp.cat"))
    assert not report.ok
    assert "associativity" in report.kinds()


def test_hom_sets(load_category):
    cat = load_category("chain3.cat")
    assert cat.hom("a", "c") == (5,)
    assert cat.hom("c", "a") == ()
    assert cat.compose(4, 3) == 5


def test_group_category_is_ordered(load_category):
    cat = load_category("klein.cat")
    assert is_ordered(cat)
    assert check_endomorphism_groups(cat).ok
    assert all(cat.is_iso(f) for f in cat.ids)
    assert cat.inverse(1) == 1


def test_idempotent_is_neither_ordered_nor_a_group(load_category):
    cat = load_category("monoid.cat")
    assert ordered_violation(cat) == 1
    report = check_endomorphism_groups(cat)
    assert report.kinds() == ["group"]


@pytest.mark.parametrize("name", ["poset2.cat", "chain3.cat", "grp_c2.cat", "orbit_c2.cat"])
def test_a_categories(load_category, name):
    assert check_a_category(load_category(name)).ok


def test_group_factors_through_its_identity(load_category):
    cat = load_category("grp_c2.cat")
    assert factorization(cat, 1) == (1, 0)


def test_factorization_witnesses_are_read_only(load_category):
    cat = load_category("grp_c2.cat")
    assert dict(cat.witnesses) == {0: (0, 0), 1: (1, 0)}
    with pytest.raises(TypeError):
        cat.witnesses[1] = (0, 1)
    assert factorization(cat, 1, frozenset({0})) == (1, 0)


def test_a_category_needs_factorizations(load_category):
    cat = load_category("poset2.cat")
    # without the arrow a -> b in A nothing factors it
    report = check_a_category(cat, sub_A=frozenset({0, 1}))
    assert "factorization" in report.kinds()


def test_final_objects(load_category):
    orbit = load_category("orbit_c2.cat")
    assert has_final_object(orbit) == "P"
    assert arrows_to_final(orbit, "P") == {"1": 2, "P": 3}
    grp = load_category("grp_c2.cat")
    assert has_final_object(grp) is None
    assert has_final_object(grp, within=grp.a_morphisms) == "o"
    with pytest.raises(PreconditionError):
        arrows_to_final(grp, "o")


def test_opposite_reverses_arrows(load_category):
    cat = load_category("chain3.cat")
    op = opposite(cat)
    assert validate_category(op).ok
    assert op.hom("c", "a") == (5,)
    assert op.compose(3, 4) == 5


def test_exterior_quotient_of_conjugations_is_the_orbit_category(load_category):
    cat = load_category("cover2.cat")
    assert check_interior(cat).ok
    quotient = exterior_quotient(cat)
    assert len(quotient.category.morphisms) == 4
    assert quotient(2) == quotient(3)
    assert quotient(4) == quotient(5)
    assert quotient(0) != quotient(1)
    assert validate_category(quotient.category).ok
    assert check_quotient_functor(quotient).ok
    assert has_final_object(quotient.category) == "P"


def test_co_exterior_quotient(load_category):
    grp = load_category("grp_c2.cat")
    whole = {"o": frozenset({0, 1})}
    assert check_cointerior(grp, whole).ok
    assert len(co_exterior_quotient(grp, whole).category.morphisms) == 1
    # the inclusion 1 -> P is not absorbed by a trivial cointerior at 1
    assert not check_cointerior(load_category("cover2.cat"), {"P": frozenset({4, 5})}).ok


def test_semidirect_product_of_the_regular_set(load_category):
    cat = load_category("grp_c2.cat")
    s = SetFunctor(on_obj={"o": (0, 1)}, on_mor={0: {0: 0, 1: 1}, 1: {0: 1, 1: 0}})
    product = semidirect_product(s, cat)
    assert validate_category(product.category).ok
    assert len(product.category.objects) == 2
    assert len(product.category.morphisms) == 4
    swap = product.lift(0, 1)
    assert product.category.src(swap) == (0, "o")
    assert product.category.dst(swap) == (1, "o")
    assert product.base(swap) == 1


def test_semidirect_product_needs_a_functor(load_category):
    s = SetFunctor(on_obj={"o": (0, 1)}, on_mor={0: {0: 0, 1: 1}, 1: {0: 0, 1: 0}})
    with pytest.raises(PreconditionError):
        semidirect_product(s, load_category("grp_c2.cat"))
