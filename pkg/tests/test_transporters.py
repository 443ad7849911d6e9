import pytest

from algebra.homotopies import validate_system
from algebra.transporters import (
    Transporters,
    center_coefficients,
    check_compatible_complement,
    check_stabilizer_compatibility,
    check_transporter_pullbacks,
    check_transporters,
    constant_coefficients,
    cyclic_group_data,
    mackey_scalar,
    mackey_system,
    special_squares,
    stabilizer_data,
    stabilizers,
    transporter_categories,
    verify_mackey_contraction,
)
from models.errors import PreconditionError
from models.modules import ModHom, Ring


@pytest.fixture(scope="module")
def cyclic():
    cache = {}

    def build(p):
        if p not in cache:
            cache[p] = Transporters(cyclic_group_data(p))
        return cache[p]

    return build


@pytest.mark.parametrize("p, morphisms", [(2, 12), (3, 27)])
def test_cyclic_transporter_sizes(cyclic, p, morphisms):
    tr = cyclic(p)
    assert len(tr.category.morphisms) == morphisms
    assert set(tr.fusion.objects) == {"1", "P"}
    assert len(tr.fusion.morphisms) == 3
    assert check_transporters(tr).ok


def test_klein_transporters(load_group):
    tr = transporter_categories(load_group("klein.grp"))
    assert len(tr.category.objects) == 5
    assert len(tr.category.morphisms) == 192
    assert set(tr.fusion.objects) == {"1", "Q1", "Q2", "Q3", "P"}
    # abelian, so F̃ is the subgroup poset
    assert len(tr.fusion.morphisms) == 12
    squares = special_squares(tr)
    assert len(squares) == 38
    assert sum(len(square.words) for square in squares) == 53


def test_objects_must_be_closed_under_subgroups(load_group):
    with pytest.raises(PreconditionError):
        Transporters(load_group("klein.grp"), subgroups=[frozenset({0, 1, 2, 3})])


@pytest.mark.parametrize("p", [2, 3])
def test_pullbacks_map_onto_special_squares(cyclic, p):
    assert check_transporter_pullbacks(cyclic(p)).ok


def test_stabilizers_of_the_regular_biset(cyclic):
    tr = cyclic(2)
    stab = stabilizer_data(tr, "P", 0)
    assert stab.subgroup == frozenset({0, 1})
    assert stab.label == "P"
    assert stab.twist == 0
    assert stabilizer_data(tr, "1", 1).label == "1"
    assert check_stabilizer_compatibility(tr, stabilizers(tr)).ok


@pytest.mark.parametrize("p", [2, 3])
def test_mackey_system_is_valid(cyclic, p):
    tr = cyclic(p)
    assert validate_system(mackey_system(tr)).ok
    assert mackey_scalar(tr, Ring.integers()) == 1


@pytest.mark.parametrize("p", [2, 3])
def test_constant_coefficients_have_trivial_homotopy(cyclic, p):
    tr = cyclic(p)
    a, complement = constant_coefficients(tr, Ring.integers())
    assert check_compatible_complement(tr, a, complement).ok
    verification = verify_mackey_contraction(tr, a, complement, 2)
    assert verification.ok, verification.report.violations
    assert [row.degree for row in verification.degrees] == [0, 1, 2]
    assert all(row.vanishes for row in verification.degrees[1:])


def test_center_coefficients(cyclic):
    tr = cyclic(2)
    a, complement = center_coefficients(tr, Ring.mod(2))
    assert a.at("1").is_zero()
    assert a.at("P").describe() == "Z/2"
    verification = verify_mackey_contraction(tr, a, complement, 2)
    assert verification.ok, verification.report.violations


def test_center_coefficients_need_a_local_ring(cyclic, load_group):
    with pytest.raises(PreconditionError):
        center_coefficients(cyclic(3), Ring.mod(2))
    with pytest.raises(PreconditionError):
        center_coefficients(Transporters(load_group("klein.grp")), Ring.mod(2))


def test_identity_is_no_transfer(cyclic):
    tr = cyclic(2)
    a, complement = constant_coefficients(tr, Ring.integers())
    inclusion = next(f for f in tr.fusion.ids if not tr.fusion.is_iso(f))
    broken = complement.replace(inclusion, ModHom.identity(complement.at("1")))
    report = check_compatible_complement(tr, a, broken)
    assert "degree" in report.kinds()
    assert not verify_mackey_contraction(tr, a, broken, 1).ok


def test_two_copies_of_p_need_two_to_be_a_unit(load_group):
    tr = Transporters(load_group("c2_double.grp"))
    assert check_transporters(tr).ok
    with pytest.raises(PreconditionError, match="not a unit"):
        mackey_scalar(tr, Ring.integers())
    assert mackey_scalar(tr, Ring.mod(3)) == 2


def test_fixed_point_is_not_basic(load_group):
    tr = Transporters(load_group("c2_point.grp"))
    with pytest.raises(PreconditionError, match="not basic"):
        stabilizers(tr)
