from typing import Iterable, List, Optional

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self
from pydantic import BaseModel, Field


class Violation(BaseModel):
    """
    One failed check, with the concrete data that exhibits it
    """

    kind: str
    message: str
    witness: str = ""

    def __str__(self) -> str:
        if self.witness:
            return f"{self.kind}: {self.message} [{self.witness}]"
        return f"{self.kind}: {self.message}"


class Report(BaseModel):
    """
    The outcome of a validation; empty means every check passed
    """

    subject: str = ""
    violations: List[Violation] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, message: str, witness: object = "") -> None:
        self.violations.append(Violation(kind=kind, message=message, witness=str(witness)))

    def note(self, text: str) -> None:
        self.notes.append(text)

    def extend(self, other: Self, prefix: Optional[str] = None) -> None:
        """
        Merge the violations of another report into this one
        :param other: the report to absorb
        :param prefix: optional label prepended to each absorbed kind
        """
        for violation in other.violations:
            kind = f"{prefix}.{violation.kind}" if prefix else violation.kind
            self.violations.append(Violation(kind=kind, message=violation.message, witness=violation.witness))
        self.notes.extend(other.notes)

    def kinds(self) -> List[str]:
        return [violation.kind for violation in self.violations]

    def first(self, kind: Optional[str] = None) -> Optional[Violation]:
        for violation in self.violations:
            if kind is None or violation.kind == kind:
                return violation
        return None

    @classmethod
    def merged(cls, subject: str, reports: Iterable[Self]) -> Self:
        result = cls(subject=subject)
        for report in reports:
            result.extend(report)
        return result
