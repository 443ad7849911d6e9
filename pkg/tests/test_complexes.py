import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from algebra.complexes import (
    StandardComplex,
    enumerate_chains,
    face,
    g_stable_decomposition,
    identify_quotient_cochains,
    stable_cochain_module,
    stable_cohomology,
)
from algebra.categories import exterior_quotient
from algebra.functors import constant_functor
from models.chains import Chain
from models.errors import PreconditionError
from models.modules import FgMod, ModHom
from models.storage import FunctorFile
from tests.settings import SLOW_SETTINGS

FUNCTORS = [
    "poset2_z.fun",
    "chain3_z.fun",
    "c2_z.fun",
    "c2_z4_sign.fun",
    "klein_z.fun",
    "klein_z2.fun",
    "orbit_c2_z.fun",
    "orbit_c2_regular.fun",
]

# H^0, H^1, H^2 in canonical form
COHOMOLOGY = {
    "poset2_z.fun": ["Z", "0", "0"],
    "chain3_z.fun": ["Z", "0", "0"],
    "c2_z.fun": ["Z", "0", "Z/2"],
    "c2_z4_sign.fun": ["Z/2", "Z/2", "Z/2"],
    "klein_z.fun": ["Z", "0", "Z/2 + Z/2"],
    "klein_z2.fun": ["Z/2", "Z/2 + Z/2", "Z/2 + Z/2 + Z/2"],
    "orbit_c2_z.fun": ["Z", "0", "0"],
    "orbit_c2_regular.fun": ["Z", "0", "0"],
}


def test_chain_counts(load_category):
    assert len(enumerate_chains(load_category("poset2.cat"), 0, cap=2)) == 2
    assert len(enumerate_chains(load_category("poset2.cat"), 1, cap=2)) == 3
    assert len(enumerate_chains(load_category("chain3.cat"), 2, cap=2)) == 10
    assert len(enumerate_chains(load_category("klein.cat"), 2, cap=2)) == 16


def test_degree_above_the_cap(load_category):
    with pytest.raises(PreconditionError):
        enumerate_chains(load_category("poset2.cat"), 3, cap=2)


def test_faces(load_category):
    cat = load_category("chain3.cat")
    chain = Chain.from_arrows(cat, (3, 4))
    assert face(cat, chain, 0).arrows == (4,)
    assert face(cat, chain, 1).arrows == (5,)
    assert face(cat, chain, 2).arrows == (3,)
    assert face(cat, Chain.from_arrows(cat, (5,)), 1) == Chain.point("a")


@pytest.mark.parametrize("name", FUNCTORS)
def test_differentials_square_to_zero(load_functor, name):
    complex = StandardComplex(load_functor(name), cap=2)
    for n in range(2):
        assert (complex.differential(n + 1) @ complex.differential(n)).is_zero()


@pytest.mark.parametrize("name", FUNCTORS)
def test_cohomology(load_functor, name):
    complex = StandardComplex(load_functor(name), cap=2)
    assert [complex.cohomology(n).describe() for n in range(3)] == COHOMOLOGY[name]


def _cohomology_order(complex: StandardComplex, n: int) -> int:
    d_prev, d_next = complex.differential(n - 1), complex.differential(n)
    cocycles = [x for x in complex.module(n).module.elements() if not any(int(v) for v in d_next(x))]
    boundaries = {tuple(int(v) for v in d_prev(y)) for y in d_prev.dom.elements()}
    assert len(cocycles) % len(boundaries) == 0
    return len(cocycles) // len(boundaries)


@pytest.mark.parametrize("name, n", [("c2_z4_sign.fun", 1), ("c2_z4_sign.fun", 2), ("klein_z2.fun", 1)])
def test_cohomology_against_counted_cocycles(load_functor, name, n):
    complex = StandardComplex.full(load_functor(name), cap=2)
    assert _cohomology_order(complex, n) == complex.cohomology(n).cardinality()


@st.composite
def sign_actions(draw):
    modulus = draw(st.sampled_from([2, 3, 4, 5, 8, 9]))
    unit = draw(st.sampled_from([u for u in range(1, modulus) if (u * u) % modulus == 1]))
    return modulus, unit


@given(action=sign_actions())
@SLOW_SETTINGS
def test_invariants_of_cyclic_actions(load_category, action):
    modulus, unit = action
    module = FgMod.cyclic(modulus)
    functor = constant_functor(load_category("grp_c2.cat"), module).replace(1, ModHom.scalar(module, unit))
    complex = StandardComplex(functor, cap=1)
    fixed = sum(1 for x in range(modulus) if (unit * x - x) % modulus == 0)
    assert complex.cohomology(0).cardinality() == fixed
    assert (complex.differential(1) @ complex.differential(0)).is_zero()


class TestStableCochains:
    @pytest.fixture
    def sign_with_g(self, load_category, fixture_dir):
        cat = load_category("grp_c2.cat").with_markings(sub_G=frozenset({0, 1}))
        return FunctorFile.read(fixture_dir / "c2_z4_sign.fun", cat=cat)

    def test_orbits_under_the_group(self, sign_with_g):
        orbits = g_stable_decomposition(sign_with_g.base, 1, cap=2)
        assert len(orbits) == 1
        assert len(orbits[0].members) == 2
        assert all(orbit.generators == (0, 1) for orbit in orbits)

    def test_stable_zero_cochains_are_the_invariants(self, sign_with_g):
        stable = stable_cochain_module(sign_with_g, 0)
        assert stable.module.describe() == "Z/2"

    def test_unstable_values_are_rejected(self, sign_with_g):
        stable = stable_cochain_module(sign_with_g, 0)
        with pytest.raises(PreconditionError, match="not G-stable"):
            stable.coordinates(lambda chain: np.array([1], dtype=object))

    def test_stable_values_round_trip(self, sign_with_g):
        stable = stable_cochain_module(sign_with_g, 0)
        coords = stable.coordinates(lambda chain: np.array([2], dtype=object))
        assert int(stable.value(coords, Chain.point("o"))[0]) == 2

    def test_embedding_into_all_cochains(self, sign_with_g):
        stable = stable_cochain_module(sign_with_g, 1)
        embed = stable.embed()
        assert embed.cod.n == 2
        assert embed.dom.describe() == "Z/2"

    def test_stable_cohomology_in_degree_zero(self, sign_with_g):
        assert stable_cohomology(sign_with_g, 0).describe() == "Z/2"


@pytest.mark.parametrize("n", [0, 1])
def test_quotient_cochains_match_the_source(load_category, n):
    # G has to contain the interior for the identification
    cover = load_category("cover2.cat").with_markings(sub_G=frozenset({0, 4, 5}))
    quotient = exterior_quotient(cover)
    functor = constant_functor(quotient.category, FgMod.free(1))
    identification = identify_quotient_cochains(quotient, functor, n)
    assert identification.tilde.module.orders == identification.base.module.orders
    assert identification.tilde.module.rank == [2, 4][n]
