"""
One command-line job: what to run, on which files, over which ring
"""

from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self
from pydantic import BaseModel, ConfigDict, Field, model_validator
from models.modules import Ring
from util.setup import DEFAULT_FIXTURE_DIR

Command = Literal[
    "validate",
    "check-ordered",
    "check-a-category",
    "check-mult",
    "product",
    "pullback",
    "cohomology",
    "verify-homotopy",
    "verify-mackey",
]

# (file suffixes accepted, number of extra arguments after the file)
SIGNATURES: Dict[str, Tuple[Tuple[str, ...], int]] = {
    "validate": ((".cat", ".fun", ".grp"), 0),
    "check-ordered": ((".cat",), 0),
    "check-a-category": ((".cat",), 0),
    "check-mult": ((".cat",), 0),
    "product": ((".cat",), 2),
    "pullback": ((".cat",), 2),
    "cohomology": ((".fun",), 0),
    "verify-homotopy": ((".fun",), 0),
    "verify-mackey": ((".grp",), 0),
}


class JobSpec(BaseModel):
    """
    A validated job; input paths are resolved against the fixture directory when they do not exist as given
    """

    model_config = ConfigDict(frozen=True)

    command: Command
    inputs: Tuple[Path, ...] = ()
    arguments: Tuple[str, ...] = ()
    ring: Optional[str] = None
    max_degree: int = Field(default=2, ge=0)
    degree_cap: int = Field(default=4, ge=0)
    fixture_dir: Path = DEFAULT_FIXTURE_DIR
    report: Optional[Path] = None
    coefficients: Literal["constant", "center"] = "constant"
    group: Optional[str] = None

    @model_validator(mode="after")
    def consistent(self) -> Self:
        suffixes, extra = SIGNATURES[self.command]
        if self.max_degree > self.degree_cap:
            raise ValueError(f"degree {self.max_degree} exceeds the cap {self.degree_cap}")
        if self.ring is not None:
            Ring.parse(self.ring)
        if self.command == "verify-mackey" and self.group is not None:
            if self.inputs:
                raise ValueError("give either a group file or --group, not both")
            if not self.group.startswith("cyclic:") or not self.group[len("cyclic:") :].isdigit():
                raise ValueError(f"--group must look like cyclic:p, got {self.group}")
        elif len(self.inputs) != 1:
            raise ValueError(f"{self.command} takes exactly one input file")
        for path in self.inputs:
            if path.suffix not in suffixes:
                raise ValueError(f"{self.command} expects a {' or '.join(suffixes)} file, got {path.name}")
            if not path.exists():
                raise ValueError(f"input file not found: {path}")
        if len(self.arguments) != extra:
            raise ValueError(f"{self.command} takes {extra} arguments after the file, got {len(self.arguments)}")
        return self

    @classmethod
    def build(cls, command: str, paths: List[str], fixture_dir: Path, **values) -> Self:
        """
        Split positional words into files and arguments and resolve the files
        :param command: the command name
        :param paths: the positional words after the command
        :param fixture_dir: where bare file names are looked up
        :param values: the remaining fields
        :return: the job
        """
        inputs, arguments = [], []
        for word in paths:
            if Path(word).suffix in (".cat", ".fun", ".grp"):
                path = Path(word)
                if not path.exists() and (fixture_dir / path).exists():
                    path = fixture_dir / path
                inputs.append(path)
            else:
                arguments.append(word)
        return cls(command=command, inputs=tuple(inputs), arguments=tuple(arguments), fixture_dir=fixture_dir, **values)

    @property
    def input(self) -> Optional[Path]:
        return self.inputs[0] if self.inputs else None

    def parsed_ring(self) -> Optional[Ring]:
        return Ring.parse(self.ring) if self.ring is not None else None

    def cyclic_prime(self) -> Optional[int]:
        if self.group is None:
            return None
        return int(self.group[len("cyclic:") :])
