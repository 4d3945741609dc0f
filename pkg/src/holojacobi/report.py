"""Verdict objects returned by the validators."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Failure:
    identity: str
    location: str = ""
    value: str = ""

    def __str__(self):
        loc = f" at {self.location}" if self.location else ""
        val = f": {self.value}" if self.value else ""
        return f"{self.identity}{loc}{val}"


@dataclass
class Report:
    """Outcome of a check: passes iff it has no failures and all sub-reports pass."""

    check: str
    failures: list[Failure] = field(default_factory=list)
    children: list["Report"] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    structural: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures and all(c.passed for c in self.children)

    def __bool__(self):
        return self.passed

    def fail(self, identity: str, location: str = "", value="") -> "Report":
        self.failures.append(Failure(identity, location, str(value)))
        return self

    def add(self, child: "Report") -> "Report":
        self.children.append(child)
        return self

    def expect_zero(self, identity: str, location: str, value) -> bool:
        """Record a failure unless ``value`` is zero; return whether it was."""
        if value.is_zero():
            return True
        self.fail(identity, location, value)
        return False

    def all_failures(self):
        yield from self.failures
        for c in self.children:
            for f in c.all_failures():
                yield Failure(f"{c.check}: {f.identity}", f.location, f.value)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "passed": self.passed,
            "structural": self.structural,
            "failures": [
                {"identity": f.identity, "location": f.location, "value": f.value}
                for f in self.failures
            ],
            "notes": list(self.notes),
            "children": [c.to_dict() for c in self.children],
        }

    def lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        out = [f"{pad}{'PASS' if self.passed else 'FAIL'} {self.check}"]
        for f in self.failures:
            out.append(f"{pad}  - {f}")
        for n in self.notes:
            out.append(f"{pad}  note: {n}")
        for c in self.children:
            out.extend(c.lines(indent + 1))
        return out

    def __str__(self):
        return "\n".join(self.lines())


@dataclass
class EquivalenceReport:
    """Independent verdicts for the conditions of an equivalence theorem."""

    check: str
    conditions: dict[str, Report]
    notes: list[str] = field(default_factory=list)

    @property
    def verdicts(self) -> dict[str, bool]:
        return {k: r.passed for k, r in self.conditions.items()}

    @property
    def agree(self) -> bool:
        return len(set(self.verdicts.values())) <= 1

    @property
    def passed(self) -> bool:
        """All conditions hold (and therefore agree)."""
        return all(self.verdicts.values())

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "agree": self.agree,
            "verdicts": self.verdicts,
            "notes": list(self.notes),
            "conditions": {k: r.to_dict() for k, r in self.conditions.items()},
        }

    def lines(self) -> list[str]:
        out = [f"{'AGREE' if self.agree else 'DISAGREE'} {self.check}: "
               + ", ".join(f"{k}={'true' if v else 'false'}" for k, v in self.verdicts.items())]
        for n in self.notes:
            out.append(f"  note: {n}")
        for r in self.conditions.values():
            out.extend(r.lines(1))
        return out

    def __str__(self):
        return "\n".join(self.lines())
