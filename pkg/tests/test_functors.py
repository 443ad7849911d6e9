import pytest

from algebra.categories import exterior_quotient
from algebra.covers import m_P_functor
from algebra.functors import (
    additive_transfer,
    check_natural,
    compose_with_quotient,
    constant_functor,
    identity_map,
    precompose,
    scalar_map,
    validate_functor,
)
from models.covers import AcMorphism, AcObject
from models.functors import NatMap
from models.modules import FgMod, ModHom, Ring

GOOD = [
    "poset2_z.fun",
    "chain3_z.fun",
    "c2_z.fun",
    "c2_z4_sign.fun",
    "klein_z.fun",
    "klein_z2.fun",
    "orbit_c2_z.fun",
    "orbit_c2_regular.fun",
]


@pytest.mark.parametrize("name", GOOD)
def test_fixture_functors_are_functors(load_functor, name):
    assert validate_functor(load_functor(name)).ok


def test_corrupted_functor_fails_functoriality(load_functor):
    report = validate_functor(load_functor("c2_bad.fun"))
    assert report.kinds() == ["functoriality"]
    assert "pair (1, 1)" in report.first().witness


def test_module_over_the_wrong_ring(load_functor):
    functor = load_functor("c2_z.fun")
    other = FgMod.cyclic(2, Ring.mod(2))
    broken = functor.model_copy(update={"on_obj": {"o": other}})
    assert validate_functor(broken).kinds() == ["ring"]


def test_replaced_map_breaks_the_identity(load_functor):
    functor = load_functor("c2_z4_sign.fun")
    broken = functor.replace(0, ModHom.scalar(functor.at("o"), 3))
    assert "identity" in validate_functor(broken).kinds()


def test_naturality(load_functor, load_category):
    sign = load_functor("c2_z4_sign.fun")
    assert check_natural(identity_map(sign)).ok
    assert check_natural(scalar_map(sign, 2)).ok
    trivial = constant_functor(load_category("grp_c2.cat"), FgMod.cyclic(4))
    forget = NatMap(src=sign, dst=trivial, components={"o": ModHom.identity(FgMod.cyclic(4))})
    assert check_natural(forget).kinds() == ["naturality"]


def test_product_with_the_group_is_the_regular_representation(load_category):
    cat = load_category("grp_c2.cat")
    regular = precompose(constant_functor(cat, FgMod.free(1)), m_P_functor(cat).functor)
    assert validate_functor(regular).ok
    assert regular.at("o").orders == (0, 0)
    assert regular(1).rows() == [[0, 1], [1, 0]]


def test_transfer_sums_over_the_fibres(load_category):
    cat = load_category("grp_c2.cat")
    transfer = constant_functor(cat, FgMod.free(1))
    fold = AcMorphism(
        dom=AcObject(terms=("o", "o")), cod=AcObject.single("o"), index_map=(0, 0), components=(0, 1)
    )
    assert additive_transfer(transfer, fold).rows() == [[1, 1]]


def test_functor_pulls_back_along_a_quotient(load_category):
    cover = load_category("cover2.cat")
    quotient = exterior_quotient(cover)
    regular = constant_functor(quotient.category, FgMod.free(1))
    pulled = compose_with_quotient(regular, quotient)
    assert pulled.base.ids == cover.ids
    assert validate_functor(pulled).ok
    assert pulled(3).equals(regular(quotient(3)))
