"""Named pass/fail results with witnesses, shared by the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckResult:
    """One named check.  ``witness`` carries the evidence on failure (first
    differing coefficient, residual rational function, ...) and is free-form
    text.  Advisory entries are informational only and never gate a run.
    """

    name: str
    passed: bool
    witness: str = ""
    advisory: bool = False


@dataclass
class CheckReport:
    """Ordered collection of check results; each name appears exactly once."""

    checks: list[CheckResult] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness: str = "", advisory: bool = False) -> None:
        if any(c.name == name for c in self.checks):
            raise ValueError(f"duplicate check name: {name!r}")
        self.checks.append(CheckResult(name, bool(passed), witness, advisory))

    def extend(self, other: "CheckReport") -> None:
        for c in other.checks:
            self.add(c.name, c.passed, c.witness, c.advisory)

    @property
    def passed(self) -> bool:
        """True when every non-advisory check passed."""
        return all(c.passed for c in self.checks if not c.advisory)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed and not c.advisory]

    def __iter__(self):
        return iter(self.checks)

    def __len__(self):
        return len(self.checks)
