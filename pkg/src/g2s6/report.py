"""Structured results for verification suites."""

from dataclasses import asdict, dataclass, field


@dataclass
class SuiteReport:
    """Outcome of one named suite in one backend.

    failures == 0 means the suite passed; an exact-backend pass always has
    max_residual == 0.
    """

    suite: str
    backend: str
    cases: int
    failures: int
    max_residual: float
    seed: int
    elapsed_ms: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return self.failures == 0

    def to_dict(self):
        d = asdict(self)
        del d["notes"]
        return d

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}  {self.suite:<24} [{self.backend}]  "
            f"cases={self.cases:<6} failures={self.failures:<4} "
            f"max_residual={self.max_residual:.3e}"
        )


class Recorder:
    """Accumulates case outcomes into a SuiteReport."""

    def __init__(self, suite, backend, seed=0):
        self.suite = suite
        self.backend = backend
        self.seed = seed
        self.cases = 0
        self.failures = 0
        self.max_residual = 0.0
        self.notes = []

    def case(self, residual, tol, note=None):
        """Record one case by residual against a tolerance."""
        self.cases += 1
        residual = float(residual)
        self.max_residual = max(self.max_residual, residual)
        if residual > tol:
            self.failures += 1
            if note:
                self.notes.append(f"{note}: residual {residual:.3e} > {tol:.1e}")

    def check(self, ok, note=None):
        """Record one boolean case."""
        self.cases += 1
        if not ok:
            self.failures += 1
            if note:
                self.notes.append(note)

    def report(self, elapsed_ms=0.0):
        return SuiteReport(
            suite=self.suite,
            backend=self.backend,
            cases=self.cases,
            failures=self.failures,
            max_residual=self.max_residual,
            seed=self.seed,
            elapsed_ms=elapsed_ms,
            notes=self.notes,
        )
