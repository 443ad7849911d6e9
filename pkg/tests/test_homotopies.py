import numpy as np
import pytest

from algebra.complexes import StandardComplex
from algebra.covers import m_P_functor
from algebra.functors import validate_functor
from algebra.homotopies import (
    HomotopyOperator,
    check_interpolation_exchange,
    check_section,
    check_transported_interpolations,
    delta_h,
    direct_product_instance,
    interpolated_chain,
    lift_chain,
    validate_system,
    verify_contraction,
)
from models.chains import Chain
from models.errors import PreconditionError
from models.functors import NatMap

SPLIT = ["poset2_z.fun", "c2_z.fun", "c2_z4_sign.fun", "orbit_c2_z.fun", "orbit_c2_regular.fun"]


@pytest.fixture(scope="module")
def instances():
    cache = {}

    def build(load_functor, name):
        if name not in cache:
            functor = load_functor(name)
            cache[name] = direct_product_instance(m_P_functor(functor.base), functor)
        return cache[name]

    return build


@pytest.mark.parametrize("name", SPLIT)
def test_direct_product_system_is_valid(load_functor, instances, name):
    instance = instances(load_functor, name)
    assert validate_system(instance.system).ok
    assert validate_functor(instance.hf.contra).ok


@pytest.mark.parametrize("name", SPLIT)
def test_canonical_section_splits(load_functor, instances, name):
    instance = instances(load_functor, name)
    assert check_section(instance.hf, instance.theta).ok


@pytest.mark.parametrize("name", SPLIT)
def test_contraction_up_to_degree_two(load_functor, instances, name):
    instance = instances(load_functor, name)
    verification = verify_contraction(instance.hf, instance.theta, 2)
    assert verification.ok, verification.report.violations
    assert [row.identity for row in verification.degrees] == [None, True, True]
    assert all(row.vanishes for row in verification.degrees[1:])


def test_h_functor_of_the_group_is_induced(load_functor, instances):
    instance = instances(load_functor, "c2_z.fun")
    # Z^ac∘m_P over the group is the regular representation, H of it two copies
    assert instance.hf.functor.at("o").orders == (0, 0)
    assert instance.hf.contra.at("o").orders == (0, 0, 0, 0)
    delta = instance.hf.inclusions["o"] @ delta_h(instance.hf)["o"]
    assert delta.rows() == [[1, 0], [0, 1], [0, 1], [1, 0]]


def test_lifted_and_interpolated_chains(load_functor, instances):
    system = instances(load_functor, "c2_z.fun").system
    cat = system.base
    chain = Chain.from_arrows(cat, (1,))
    t = system.s.fiber("o")[0]
    lifted = lift_chain(system, chain, t)
    assert lifted.n == 1
    assert system.product.base(lifted.arrows[0]) == 1
    top = interpolated_chain(system, lifted, 2)
    assert top.n == 2
    assert top.objs[-1] == system.final
    with pytest.raises(PreconditionError):
        interpolated_chain(system, lifted, 3)
    with pytest.raises(PreconditionError):
        lift_chain(system, chain, "not a point")


@pytest.mark.parametrize("name", ["c2_z.fun", "orbit_c2_regular.fun"])
def test_interpolations_are_coherent(load_functor, instances, name):
    system = instances(load_functor, name).system
    assert check_interpolation_exchange(system, degree=2).ok
    assert check_transported_interpolations(system, degree=2).ok


def test_homotopy_does_not_depend_on_the_lift(load_functor, instances):
    instance = instances(load_functor, "orbit_c2_regular.fun")
    complex = StandardComplex(instance.hf.functor, cap=2)
    operator = HomotopyOperator(instance.hf, instance.theta, complex)
    assert operator.lift_independence(0).ok
    assert operator.lift_independence(1).ok


def test_homotopy_of_zero_is_zero(load_functor, instances):
    instance = instances(load_functor, "c2_z.fun")
    complex = StandardComplex(instance.hf.functor, cap=1)
    operator = HomotopyOperator(instance.hf, instance.theta, complex)
    zero = operator.apply(lambda chain: np.zeros(2, dtype=object), 0)
    assert not any(int(v) for v in zero)


class TestMutations:
    def test_broken_nu_breaks_naturality(self, load_functor, instances):
        system = instances(load_functor, "c2_z.fun").system
        key = next(iter(sorted(system.nu, key=str)))
        other = 1 if system.nu[key] == 0 else 0
        broken = system.model_copy(update={"nu": {**system.nu, key: other}})
        report = validate_system(broken)
        assert "naturality" in report.kinds()

    def test_nu_with_the_wrong_endpoints(self, load_functor, instances):
        system = instances(load_functor, "orbit_c2_z.fun").system
        key = next(k for k in system.nu if k[1] == "1")
        broken = system.model_copy(update={"nu": {**system.nu, key: 3}})
        assert "nu" in validate_system(broken).kinds()

    def test_scaled_section_is_not_a_section(self, load_functor, instances):
        instance = instances(load_functor, "c2_z.fun")
        theta = instance.theta
        doubled = NatMap(
            name="2θ",
            src=theta.src,
            dst=theta.dst,
            components={obj: theta[obj].scaled(2) for obj in theta.components},
        )
        assert check_section(instance.hf, doubled).kinds() == ["section"]
        stopped = verify_contraction(instance.hf, doubled, 1)
        assert not stopped.ok
        assert stopped.degrees == []

    def test_scaled_section_breaks_the_identity(self, load_functor, instances):
        instance = instances(load_functor, "c2_z.fun")
        theta = instance.theta
        doubled = NatMap(src=theta.src, dst=theta.dst, components={obj: theta[obj].scaled(2) for obj in theta.components})
        verification = verify_contraction(instance.hf, doubled, 1, require_split=False)
        assert verification.degrees[1].identity is False
        assert "identity" in verification.report.kinds()
