"""Check results shared by the verification suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    """Outcome of a single verification step.

    ``residual`` is 0.0 for exact symbolic checks that pass, the worst
    absolute residual for numeric checks, and None when an exact check
    fails (the offending polynomial goes in ``detail``).
    """

    suite: str
    check_id: str
    identity: str
    passed: bool
    residual: float | None = None
    detail: str = ""
    elapsed_ms: float = 0.0

    def as_dict(self):
        return {
            "suite": self.suite,
            "check_id": self.check_id,
            "identity": self.identity,
            "status": "pass" if self.passed else "fail",
            "residual": self.residual,
            "detail": self.detail,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


@dataclass
class Report:
    """An ordered collection of checks, ready for JSON or text output."""

    suite: str
    checks: list = field(default_factory=list)

    def extend(self, checks):
        self.checks.extend(checks)
        return self

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def failures(self):
        return [check for check in self.checks if not check.passed]

    def as_dict(self):
        return {
            "suite": self.suite,
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": len(self.failures()),
            "checks": [check.as_dict() for check in sorted_checks(self.checks)],
        }

    def text_lines(self):
        lines = []
        for check in sorted_checks(self.checks):
            status = "PASS" if check.passed else "FAIL"
            resid = "" if check.residual is None else f" residual={check.residual:.3e}"
            detail = f" {check.detail}" if check.detail and not check.passed else ""
            lines.append(
                f"{status} [{check.suite}:{check.check_id}] {check.identity}"
                f"{resid} ({check.elapsed_ms:.1f} ms){detail}"
            )
        n_fail = len(self.failures())
        lines.append(
            f"{'OK' if self.passed else 'FAILED'}: {len(self.checks) - n_fail}/"
            f"{len(self.checks)} checks passed in suite {self.suite}"
        )
        return lines


def sorted_checks(checks):
    """Stable, deterministic report order regardless of execution order."""
    return sorted(checks, key=lambda check: (check.suite, check.check_id))
