"""Rewrite category, functor and group files in canonical form."""

from pathlib import Path
from typing import Dict, List, Optional
import argparse
import pandas as pd

from models.errors import InputError
from models.storage import CategoryFile, FunctorFile, GroupFile
from util.setup import DEFAULT_FIXTURE_DIR


def tidy_file(path: Path, outdir: Optional[Path] = None) -> Dict[str, object]:
    """
    Read one fixture and write it back canonically
    :param path: the fixture
    :param outdir: where to write; None overwrites the input
    :return: a summary row
    """
    target = (outdir / path.name) if outdir is not None else path
    before = path.read_text(encoding="utf-8")
    if path.suffix == ".cat":
        cat = CategoryFile.read(path)
        text = CategoryFile.dumps(cat)
        size = f"{len(cat.objects)} objects, {len(cat.morphisms)} morphisms"
    elif path.suffix == ".fun":
        reference = FunctorFile.category_path(path)
        functor = FunctorFile.read(path)
        category = reference.relative_to(path.parent).as_posix() if reference is not None else None
        text = FunctorFile.dumps(functor, category)
        size = f"{len(functor.base.objects)} modules over {functor.ring}"
    else:
        data = GroupFile.read(path)
        text = GroupFile.dumps(data)
        size = f"|G| = {data.group.order}, |Ω| = {data.points}"
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    return {"file": path.name, "size": size, "changed": text != before}


def tidy_dir(indir: Path, outdir: Optional[Path] = None) -> pd.DataFrame:
    rows: List[Dict[str, object]] = []
    for path in sorted(indir.iterdir()):
        if path.suffix not in (".cat", ".fun", ".grp"):
            continue
        try:
            rows.append(tidy_file(path, outdir))
        except InputError as exc:
            rows.append({"file": path.name, "size": f"error: {exc}", "changed": False})
    return pd.DataFrame(rows, columns=["file", "size", "changed"])


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--indir", type=str, default=None, help="Directory of fixtures to tidy")
    parser.add_argument("--outdir", type=str, default=None, help="Where to write the tidy files")
    parser.add_argument("--inplace", action="store_true", help="Overwrite the input files with tidy output")
    args = parser.parse_args()

    indir = Path(args.indir) if args.indir else DEFAULT_FIXTURE_DIR
    if not indir.exists():
        print(f"Input directory not found: {indir}")
        return
    if not args.inplace and not args.outdir:
        print("Give --outdir or --inplace")
        return

    summary = tidy_dir(indir, None if args.inplace else Path(args.outdir))
    print(summary.to_string(index=False))
    print(f"Tidied {len(summary)} files, {int(summary['changed'].sum())} changed")


if __name__ == "__main__":
    main()
