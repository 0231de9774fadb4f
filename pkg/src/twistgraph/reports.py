"""Check reports shared by the verifiers and the command line."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    check: str
    passed: bool
    counterexample: object = None
    detail: dict = field(default_factory=dict)


@dataclass
class Report:
    """An ordered list of named check results."""

    results: list = field(default_factory=list)

    def add(self, check: str, passed: bool, counterexample=None, **detail) -> CheckResult:
        res = CheckResult(check, bool(passed), counterexample, detail)
        self.results.append(res)
        return res

    def extend(self, other: Report, prefix: str = "") -> None:
        for r in other.results:
            self.results.append(CheckResult(prefix + r.check, r.passed, r.counterexample, r.detail))

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __bool__(self) -> bool:
        return self.passed

    def failures(self) -> list:
        return [r for r in self.results if not r.passed]

    def __getitem__(self, check: str) -> CheckResult:
        for r in self.results:
            if r.check == check:
                return r
        raise KeyError(check)
