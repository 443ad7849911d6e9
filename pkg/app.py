"""
Entry point for the trivial-homotopy lab
Initialize logging and env vars, turn the command line into a JobSpec, run it, and print the report

Examples:
python app.py validate poset2.cat
python app.py cohomology c2_z4_sign.fun --max-degree 2
python app.py verify-mackey --group cyclic:3 --coefficients constant
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional, Tuple
from dotenv import load_dotenv
from pydantic import ValidationError
from algebra.categories import (
    check_a_category,
    check_endomorphism_groups,
    ordered_violation,
    validate_category,
    validate_markings,
)
from algebra.complexes import StandardComplex
from algebra.covers import (
    AdditiveCover,
    check_multiplicative,
    check_product_cone,
    check_pullback_cones,
    direct_product,
    m_P_functor,
    partition_rows,
    pull_back,
)
from algebra.functors import validate_functor
from algebra.homotopies import direct_product_instance, verify_contraction
from algebra.transporters import (
    Transporters,
    center_coefficients,
    check_transporter_pullbacks,
    check_transporters,
    constant_coefficients,
    cyclic_group_data,
    verify_mackey_contraction,
)
from models.categories import FinCat
from models.errors import InputError, PropertyFailure
from models.jobs import SIGNATURES, JobSpec
from models.modules import Ring
from models.reports import Report
from models.storage import CategoryFile, FunctorFile, GroupFile, _ensure_dir
from util.setup import Settings, setup_logger
from views.reports import (
    render_cohomology,
    render_cone,
    render_partition,
    render_report,
    render_verification,
)

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2


def parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trivhom", description="Check finite categories and verify trivial homotopies of stable cohomology"
    )
    parser.add_argument("command", choices=sorted(SIGNATURES), help="What to run")
    parser.add_argument("inputs", nargs="*", help="Input file, then object names or morphism ids where needed")
    parser.add_argument("--ring", type=str, default=None, help="Coefficient ring: Z or Zmod:p^k")
    parser.add_argument("--max-degree", type=int, default=2, help="Highest degree to verify")
    parser.add_argument("--fixture-dir", type=str, default=None, help="Where bare file names are looked up")
    parser.add_argument("--report", type=str, default=None, help="Also write the report to this path")
    parser.add_argument(
        "--coefficients", choices=["constant", "center"], default="constant", help="Coefficients for verify-mackey"
    )
    parser.add_argument("--group", type=str, default=None, help="Built-in group data for verify-mackey, e.g. cyclic:2")
    return parser


def _base_category(cat: FinCat) -> Report:
    report = validate_category(cat)
    if report.ok:
        report.extend(validate_markings(cat), prefix="markings")
    return report


def run_validate(job: JobSpec) -> Tuple[str, bool]:
    path = job.input
    if path.suffix == ".cat":
        cat = CategoryFile.read(path)
        report = _base_category(cat)
        return render_report(report, f"validate {path.name}"), report.ok
    if path.suffix == ".fun":
        functor = FunctorFile.read(path, ring=job.parsed_ring())
        report = _base_category(functor.base)
        if report.ok:
            report.extend(validate_functor(functor))
        return render_report(report, f"validate {path.name}"), report.ok
    tr = Transporters(GroupFile.read(path))
    report = check_transporters(tr)
    return render_report(report, f"validate {path.name}"), report.ok


def run_check_ordered(job: JobSpec) -> Tuple[str, bool]:
    cat = CategoryFile.read(job.input)
    report = _base_category(cat)
    if report.ok:
        witness = ordered_violation(cat)
        if witness is not None:
            report.add("ordered", f"{cat.describe(witness)} goes back along an arrow but is no isomorphism", witness)
        report.extend(check_endomorphism_groups(cat))
    return render_report(report, f"check-ordered {job.input.name}"), report.ok


def run_check_a_category(job: JobSpec) -> Tuple[str, bool]:
    cat = CategoryFile.read(job.input)
    report = _base_category(cat)
    if report.ok:
        report.extend(check_a_category(cat))
    return render_report(report, f"check-a-category {job.input.name}"), report.ok


def run_check_mult(job: JobSpec) -> Tuple[str, bool]:
    """
    Epimorphisms, the divisor-class partition for every (Q, R, T, α), and every pairwise pull-back
    """
    cat = CategoryFile.read(job.input)
    report = _base_category(cat)
    if not report.ok:
        return render_report(report, f"check-mult {job.input.name}"), False
    rows = partition_rows(cat)
    report.extend(check_multiplicative(cat, rows))
    if report.ok:
        cover = AdditiveCover(cat)
        pairs = 0
        for alpha in cat.ids:
            for beta in cat.into(cat.dst(alpha)):
                cone = pull_back(cat, alpha, beta, cover, check=False)
                report.extend(check_pullback_cones(cat, alpha, beta, cone), prefix="pullback")
                pairs += 1
        report.note(f"{pairs} pull-backs checked")
    text = render_report(report, f"check-mult {job.input.name}") + "\n" + render_partition(cat, rows) + "\n"
    return text, report.ok


def _object(cat: FinCat, name: str) -> str:
    if name not in cat.ident:
        raise InputError(f"unknown object {name} in {cat.name or 'category'}")
    return name


def _morphism(cat: FinCat, word: str) -> int:
    try:
        f = int(word)
    except ValueError:
        raise InputError(f"expected a morphism id, got {word!r}") from None
    if f not in cat:
        raise InputError(f"unknown morphism {f} in {cat.name or 'category'}")
    return f


def run_product(job: JobSpec) -> Tuple[str, bool]:
    cat = CategoryFile.read(job.input)
    report = _base_category(cat)
    if not report.ok:
        return render_report(report, f"product {job.input.name}"), False
    left, right = (_object(cat, name) for name in job.arguments)
    cover = AdditiveCover(cat)
    cone = direct_product(cat, left, right, cover, check=False)
    report.extend(check_product_cone(cat, left, right, cone, cover))
    return render_cone(cat, cone, f"{left} × {right}") + "\n" + render_report(report, "universal property"), report.ok


def run_pullback(job: JobSpec) -> Tuple[str, bool]:
    cat = CategoryFile.read(job.input)
    report = _base_category(cat)
    if not report.ok:
        return render_report(report, f"pullback {job.input.name}"), False
    alpha, beta = (_morphism(cat, word) for word in job.arguments)
    cone = pull_back(cat, alpha, beta, check=False)
    report.extend(check_pullback_cones(cat, alpha, beta, cone))
    title = f"pull-back of {cat.label(alpha)} and {cat.label(beta)}"
    return render_cone(cat, cone, title) + "\n" + render_report(report, "universal property"), report.ok


def run_cohomology(job: JobSpec) -> Tuple[str, bool]:
    functor = FunctorFile.read(job.input, ring=job.parsed_ring())
    report = _base_category(functor.base)
    if report.ok:
        report.extend(validate_functor(functor))
    if not report.ok:
        return render_report(report, f"cohomology {job.input.name}"), False
    complex = StandardComplex(functor, cap=job.degree_cap)
    groups = {n: complex.cohomology(n) for n in range(job.max_degree + 1)}
    return render_cohomology(functor.name or job.input.stem, groups), True


def run_verify_homotopy(job: JobSpec) -> Tuple[str, bool]:
    """
    The direct-product system over the functor's category, its canonical section, and the contraction
    """
    functor = FunctorFile.read(job.input, ring=job.parsed_ring())
    report = _base_category(functor.base)
    if report.ok:
        report.extend(validate_functor(functor))
    if report.ok:
        report.extend(check_multiplicative(functor.base))
    if not report.ok:
        return render_report(report, f"verify-homotopy {job.input.name}"), False
    instance = direct_product_instance(m_P_functor(functor.base), functor)
    verification = verify_contraction(instance.hf, instance.theta, job.max_degree)
    return render_verification(verification, f"verify-homotopy {job.input.name}"), verification.ok


def run_verify_mackey(job: JobSpec) -> Tuple[str, bool]:
    p = job.cyclic_prime()
    data = cyclic_group_data(p) if p is not None else GroupFile.read(job.input)
    tr = Transporters(data)
    report = check_transporters(tr)
    if report.ok:
        report.extend(check_transporter_pullbacks(tr))
    if not report.ok:
        return render_report(report, f"verify-mackey {data.name}"), False
    ring = job.parsed_ring()
    if job.coefficients == "constant":
        a, complement = constant_coefficients(tr, ring or Ring.integers())
    else:
        a, complement = center_coefficients(tr, ring or Ring.mod(data.prime))
    verification = verify_mackey_contraction(tr, a, complement, job.max_degree)
    return render_verification(verification, f"verify-mackey {data.name} with {a.name}"), verification.ok


RUNNERS = {
    "validate": run_validate,
    "check-ordered": run_check_ordered,
    "check-a-category": run_check_a_category,
    "check-mult": run_check_mult,
    "product": run_product,
    "pullback": run_pullback,
    "cohomology": run_cohomology,
    "verify-homotopy": run_verify_homotopy,
    "verify-mackey": run_verify_mackey,
}


def run(job: JobSpec) -> int:
    """
    Run one job, print its report and write it to job.report when asked
    :param job: the job
    :return: the exit status
    """
    start = time.perf_counter()
    text, ok = RUNNERS[job.command](job)
    sys.stdout.write(text)
    if job.report is not None:
        _ensure_dir(job.report)
        job.report.write_text(text, encoding="utf-8")
    logger.info(f"{job.command} finished in {time.perf_counter() - start:.2f}s: {'pass' if ok else 'fail'}")
    return EXIT_PASS if ok else EXIT_FAILURE


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv(override=True)
    args = parser().parse_args(argv)
    try:
        settings = Settings.from_env(fixture_dir=args.fixture_dir)
    except ValidationError as exc:
        sys.stderr.write(f"error: bad settings: {exc.errors()[0]['msg']}\n")
        return EXIT_INPUT
    setup_logger(logging.getLogger(), settings.log_level)
    try:
        job = JobSpec.build(
            args.command,
            args.inputs,
            settings.fixture_dir,
            ring=args.ring,
            max_degree=args.max_degree,
            degree_cap=settings.max_degree,
            report=Path(args.report) if args.report else None,
            coefficients=args.coefficients,
            group=args.group,
        )
        return run(job)
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc.errors()[0]['msg']}\n")
        return EXIT_INPUT
    except InputError as exc:
        logger.error(str(exc))
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except PropertyFailure as exc:
        logger.error(str(exc))
        sys.stderr.write(f"failure: {exc}\n")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
