import pytest
from pydantic import ValidationError

from algebra.complexes import enumerate_chains
from app import EXIT_FAILURE, EXIT_INPUT, EXIT_PASS, main
from models.errors import PreconditionError
from models.jobs import JobSpec
from util.setup import DEFAULT_FIXTURE_DIR, max_degree, max_morphisms


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("TRIVHOM_MAX_DEGREE", "TRIVHOM_MAX_MORPHISMS", "TRIVHOM_FIXTURE_DIR", "TRIVHOM_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def run(capsys):
    def call(*argv):
        status = main([*argv, "--fixture-dir", str(DEFAULT_FIXTURE_DIR)])
        out, err = capsys.readouterr()
        return status, out, err

    return call


def test_validate_category(run):
    status, out, _ = run("validate", "poset2.cat")
    assert status == EXIT_PASS
    assert "PASS" in out


def test_validate_reports_associativity(run):
    status, out, _ = run("validate", "klein_bad_comp.cat")
    assert status == EXIT_FAILURE
    assert "associativity" in out


def test_cohomology_of_a_broken_functor(run):
    status, out, _ = run("cohomology", "c2_bad.fun")
    assert status == EXIT_FAILURE
    assert "functoriality" in out


def test_cohomology_table(run):
    status, out, _ = run("cohomology", "c2_z4_sign.fun")
    assert status == EXIT_PASS
    assert "Z/2" in out


def test_verify_homotopy(run):
    status, out, _ = run("verify-homotopy", "c2_z.fun", "--max-degree", "2")
    assert status == EXIT_PASS
    assert "degree 1: d∘h + h∘d = id PASS" in out
    assert "degree 2: d∘h + h∘d = id PASS" in out


def test_check_mult_finds_the_idempotent(run):
    status, out, _ = run("check-mult", "monoid.cat")
    assert status == EXIT_FAILURE
    assert "epi" in out


def test_product_and_pullback(run):
    status, out, _ = run("product", "orbit_c2.cat", "1", "1")
    assert status == EXIT_PASS
    assert "2 terms" in out
    status, _, _ = run("pullback", "orbit_c2.cat", "2", "2")
    assert status == EXIT_PASS


def test_unknown_object(run):
    status, _, err = run("product", "orbit_c2.cat", "1", "Q")
    assert status == EXIT_INPUT
    assert "unknown object Q" in err


@pytest.mark.parametrize("group", ["cyclic:2", "cyclic:3"])
def test_verify_mackey_on_cyclic_groups(run, group):
    status, out, _ = run("verify-mackey", "--group", group)
    assert status == EXIT_PASS
    assert "degree 1: d∘h + h∘d = id PASS" in out


def test_verify_mackey_with_center_coefficients(run):
    status, _, _ = run("verify-mackey", "--group", "cyclic:2", "--coefficients", "center")
    assert status == EXIT_PASS


def test_verify_mackey_rejects_non_unit_index(run):
    status, _, err = run("verify-mackey", "c2_double.grp")
    assert status == EXIT_INPUT
    assert "not a unit" in err


def test_verify_mackey_rejects_non_basic_biset(run):
    status, _, err = run("verify-mackey", "c2_point.grp")
    assert status == EXIT_INPUT
    assert "not basic" in err


def test_parse_error_names_file_and_line(run, tmp_path):
    path = tmp_path / "bad.cat"
    path.write_text("BOGUS\n")
    status, _, err = run("validate", str(path))
    assert status == EXIT_INPUT
    assert f"{path}:1:" in err


def test_missing_file(run):
    status, _, err = run("validate", "absent.cat")
    assert status == EXIT_INPUT
    assert "not found" in err


def test_degree_above_the_cap(run):
    status, _, err = run("cohomology", "c2_z.fun", "--max-degree", "9")
    assert status == EXIT_INPUT
    assert "exceeds the cap" in err


def test_reports_are_deterministic(run, tmp_path):
    first, second = tmp_path / "one.txt", tmp_path / "two.txt"
    assert run("check-mult", "orbit_c2.cat", "--report", str(first))[0] == EXIT_PASS
    assert run("check-mult", "orbit_c2.cat", "--report", str(second))[0] == EXIT_PASS
    assert first.read_bytes() == second.read_bytes()


class TestJobSpec:
    def test_bare_names_resolve_to_fixtures(self):
        job = JobSpec.build("validate", ["poset2.cat"], DEFAULT_FIXTURE_DIR)
        assert job.input == DEFAULT_FIXTURE_DIR / "poset2.cat"
        assert job.max_degree == 2

    def test_wrong_suffix(self):
        with pytest.raises(ValidationError):
            JobSpec.build("cohomology", ["poset2.cat"], DEFAULT_FIXTURE_DIR)

    def test_wrong_number_of_arguments(self):
        with pytest.raises(ValidationError):
            JobSpec.build("product", ["orbit_c2.cat", "1"], DEFAULT_FIXTURE_DIR)

    def test_group_and_file_together(self):
        with pytest.raises(ValidationError):
            JobSpec.build("verify-mackey", ["c2.grp"], DEFAULT_FIXTURE_DIR, group="cyclic:2")

    def test_bad_group_literal(self):
        with pytest.raises(ValidationError):
            JobSpec.build("verify-mackey", [], DEFAULT_FIXTURE_DIR, group="dihedral:4")

    def test_cyclic_prime(self):
        job = JobSpec.build("verify-mackey", [], DEFAULT_FIXTURE_DIR, group="cyclic:3")
        assert job.cyclic_prime() == 3
        assert job.input is None


class TestSettings:
    def test_defaults(self):
        assert max_degree() == 4
        assert max_morphisms() == 10_000

    def test_smaller_override(self):
        assert max_degree(2) == 2

    def test_override_above_the_cap(self, monkeypatch):
        with pytest.raises(PreconditionError, match="exceeds the cap 4"):
            max_degree(9)
        monkeypatch.setenv("TRIVHOM_MAX_DEGREE", "9")
        assert max_degree(9) == 9

    def test_negative_environment_value(self, monkeypatch):
        monkeypatch.setenv("TRIVHOM_MAX_DEGREE", "-1")
        with pytest.raises(ValidationError):
            max_degree()

    def test_malformed_morphism_bound(self, monkeypatch):
        monkeypatch.setenv("TRIVHOM_MAX_MORPHISMS", "lots")
        with pytest.raises(ValidationError):
            max_morphisms()

    def test_chain_enumeration_honours_the_cap(self, load_category):
        cat = load_category("poset2.cat")
        assert len(enumerate_chains(cat, 5, cap=5)) > 0
        with pytest.raises(PreconditionError):
            enumerate_chains(cat, 1, cap=50)
