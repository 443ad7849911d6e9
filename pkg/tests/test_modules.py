import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from algebra.modules import (
    block_diagonal,
    cokernel,
    complex_cohomology,
    determinant,
    direct_sum,
    fixed_submodule,
    image,
    integer_kernel,
    kernel,
    rank_nullity_holds,
    smith_normal_form,
    solve,
)
from models.errors import PreconditionError, PropertyFailure
from models.modules import FgMod, ModHom, Ring, int_matrix, matmul
from tests.settings import STANDARD_SETTINGS


@st.composite
def integer_matrices(draw, max_side=4, bound=12):
    rows = draw(st.integers(min_value=1, max_value=max_side))
    cols = draw(st.integers(min_value=1, max_value=max_side))
    values = draw(st.lists(st.integers(-bound, bound), min_size=rows * cols, max_size=rows * cols))
    return int_matrix([values[i * cols : (i + 1) * cols] for i in range(rows)], rows, cols)


def hom(dom: FgMod, cod: FgMod, rows) -> ModHom:
    return ModHom(dom=dom, cod=cod, matrix=rows)


class TestRing:
    def test_parse(self):
        assert Ring.parse("Z") == Ring.integers()
        assert Ring.parse("Zmod:2^3").modulus == 8
        assert Ring.parse("Zmod:9") == Ring.mod(9)
        assert str(Ring.parse("Zmod:8")) == "Zmod:2^3"

    def test_modulus_must_be_a_prime_power(self):
        with pytest.raises(ValidationError):
            Ring.mod(6)

    def test_units(self):
        ring = Ring.mod(4)
        assert ring.is_unit(3)
        assert not ring.is_unit(2)
        assert ring.inverse(3) == 3
        assert Ring.integers().is_unit(-1)
        assert not Ring.integers().is_unit(2)


class TestFgMod:
    def test_parse_and_describe(self):
        module = FgMod.parse("Z/6 + Z + Z/4")
        assert module.orders == (6, 0, 4)
        assert module.describe() == "Z + Z/2 + Z/12"
        assert FgMod.parse(str(module)) == module

    def test_r_stands_for_the_coefficient_ring(self):
        assert FgMod.parse("R^2", Ring.mod(4)).orders == (4, 4)

    def test_orders_must_divide_the_modulus(self):
        with pytest.raises(ValidationError):
            FgMod.parse("Z/3", Ring.mod(4))

    def test_cardinality_and_elements(self):
        module = FgMod.parse("Z/2 + Z/3")
        assert module.cardinality() == 6
        assert len(list(module.elements())) == 6
        assert FgMod.free(1).cardinality() is None

    def test_isomorphism_is_up_to_invariant_factors(self):
        assert FgMod.parse("Z/2 + Z/3").is_isomorphic(FgMod.parse("Z/6"))
        assert not FgMod.parse("Z/2 + Z/2").is_isomorphic(FgMod.parse("Z/4"))


class TestModHom:
    def test_matrix_is_reduced_into_the_codomain(self):
        z4 = FgMod.cyclic(4)
        assert hom(z4, z4, [[7]]).rows() == [[3]]

    def test_well_definedness_is_enforced(self):
        with pytest.raises(ValidationError):
            hom(FgMod.cyclic(2), FgMod.cyclic(4), [[1]])
        with pytest.raises(ValidationError):
            hom(FgMod.cyclic(2), FgMod.free(1), [[1]])

    def test_composition(self):
        z = FgMod.free(1)
        double = ModHom.scalar(z, 2)
        triple = ModHom.scalar(z, 3)
        assert (double @ triple).rows() == [[6]]
        assert (double + triple).equals(ModHom.scalar(z, 5))
        assert (double - double).is_zero()

    def test_block_diagonal(self):
        z4 = FgMod.cyclic(4)
        total = block_diagonal([ModHom.scalar(z4, 3), ModHom.identity(FgMod.free(1))])
        assert total.dom == direct_sum([z4, FgMod.free(1)])
        assert total.rows() == [[3, 0], [0, 1]]


class TestSmithNormalForm:
    @given(matrix=integer_matrices())
    @STANDARD_SETTINGS
    def test_transforms_reproduce_the_diagonal(self, matrix):
        snf = smith_normal_form(matrix)
        assert np.array_equal(matmul(matmul(snf.U, matrix), snf.V), snf.D)
        assert abs(determinant(snf.U)) == 1
        assert abs(determinant(snf.V)) == 1

    @given(matrix=integer_matrices())
    @STANDARD_SETTINGS
    def test_diagonal_is_a_divisibility_chain(self, matrix):
        diagonal = smith_normal_form(matrix).diagonal
        nonzero = [d for d in diagonal if d]
        assert all(d > 0 for d in nonzero)
        assert diagonal[: len(nonzero)] == nonzero
        for a, b in zip(nonzero, nonzero[1:]):
            assert b % a == 0

    @given(matrix=integer_matrices())
    @STANDARD_SETTINGS
    def test_integer_kernel_is_annihilated(self, matrix):
        basis = integer_kernel(matrix)
        assert basis.shape[1] == matrix.shape[1] - smith_normal_form(matrix).rank
        if basis.size:
            assert all(int(x) == 0 for x in matmul(matrix, basis).flat)

    @given(matrix=integer_matrices(max_side=3, bound=6))
    @STANDARD_SETTINGS
    def test_rank_nullity_on_free_modules(self, matrix):
        rows, cols = matrix.shape
        h = hom(FgMod.free(cols), FgMod.free(rows), matrix)
        assert rank_nullity_holds(h)


class TestSubquotients:
    def test_kernel_image_cokernel_of_multiplication_by_two(self):
        z4 = FgMod.cyclic(4)
        double = ModHom.scalar(z4, 2)
        assert kernel(double)[0].describe() == "Z/2"
        assert image(double)[0].describe() == "Z/2"
        assert cokernel(double)[0].describe() == "Z/2"

    def test_cokernel_over_the_integers(self):
        z = FgMod.free(2)
        h = hom(z, z, [[2, 0], [0, 3]])
        assert cokernel(h)[0].describe() == "Z/6"
        assert kernel(h)[0].is_zero()

    def test_solve(self):
        z6 = FgMod.cyclic(6)
        double = ModHom.scalar(z6, 2)
        x = solve(double, np.array([4], dtype=object))
        assert x is not None and double(x)[0] == 4
        assert solve(double, np.array([3], dtype=object)) is None

    def test_fixed_submodule_of_a_sign_action(self):
        z4 = FgMod.cyclic(4)
        fixed, inclusion = fixed_submodule(z4, [ModHom.scalar(z4, -1)])
        assert fixed.describe() == "Z/2"
        assert inclusion.cod == z4

    def test_fixed_submodule_requires_automorphisms(self):
        z4 = FgMod.cyclic(4)
        with pytest.raises(PreconditionError):
            fixed_submodule(z4, [ModHom.scalar(z4, 2)])


class TestComplexCohomology:
    def test_cohomology_of_a_short_complex(self):
        # Z --2--> Z --0--> Z: cohomology at the middle is Z/2
        z = FgMod.free(1)
        assert complex_cohomology(ModHom.scalar(z, 2), ModHom.zero(z, z)).describe() == "Z/2"

    def test_sign_complex_over_z4(self):
        z4 = FgMod.cyclic(4)
        d_prev = ModHom.scalar(z4, 2)
        d_next = ModHom.scalar(z4, 2)
        assert complex_cohomology(d_prev, d_next).describe() == "0"

    def test_nonzero_composite_is_reported(self):
        z = FgMod.free(1)
        with pytest.raises(PropertyFailure) as info:
            complex_cohomology(ModHom.identity(z), ModHom.identity(z))
        assert "d∘d" in str(info.value)
