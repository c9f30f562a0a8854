import hashlib
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from app.algebra.field import is_prime
from app.core.errors import HypothesisError


class Theorem(str, Enum):
    """验证任务对应的定理"""
    FLANDERS = "flanders"
    MAIN = "main"
    PENCIL = "pencil"
    SQUARE = "square"
    REMARK2_STRONG = "remark2-strong"
    REMARK2_CONJECTURE = "remark2-conjecture"
    REMARK2_SMALL_CODIM = "remark2-small-codim"


SQUARE_THEOREMS = {
    Theorem.PENCIL,
    Theorem.SQUARE,
    Theorem.REMARK2_STRONG,
    Theorem.REMARK2_CONJECTURE,
    Theorem.REMARK2_SMALL_CODIM,
}
# theorems whose direction has rank exactly n - 1
CORANK_ONE_THEOREMS = {
    Theorem.PENCIL,
    Theorem.REMARK2_STRONG,
    Theorem.REMARK2_CONJECTURE,
    Theorem.REMARK2_SMALL_CODIM,
}
CONSTANT_DET_THEOREMS = {
    Theorem.REMARK2_STRONG,
    Theorem.REMARK2_CONJECTURE,
    Theorem.REMARK2_SMALL_CODIM,
}


class CampaignMode(str, Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLE = "sample"


class CampaignSpec(BaseModel):
    """验证任务参数

    ``ranks`` are the ranks of the canonical directions N (for ``flanders`` the rank bound r).
    ``workers`` is excluded from the serialized echo: it never changes a report.
    """
    model_config = ConfigDict(use_enum_values=False)

    theorem: Theorem
    q: int
    n: int
    p: Optional[int] = None
    codim_min: int = 0
    codim_max: int = 0
    ranks: Optional[List[int]] = None
    mode: CampaignMode = CampaignMode.EXHAUSTIVE
    samples: int = Field(
        default=10_000,
        description=(
            "Sample-mode draws per rank. The codim of each draw is uniform over codim_min..codim_max, "
            "not weighted by subspace count; within a codim the subspace is uniform."
        ),
    )
    seed: int = 0
    random_conjugates: int = 0
    allow_out_of_hypothesis: bool = False
    element_budget: Optional[int] = None
    workers: int = Field(default=1, exclude=True)

    @field_validator("q")
    @classmethod
    def q_is_prime(cls, v: int) -> int:
        if not is_prime(v):
            raise ValueError(f"q = {v} is not a prime (only prime fields are supported)")
        return v

    @field_validator("n", "samples", "workers")
    @classmethod
    def must_be_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be positive")
        return v

    @field_validator("codim_min", "codim_max", "seed", "random_conjugates")
    @classmethod
    def must_be_non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("must be non-negative")
        return v

    @model_validator(mode="after")
    def check_hypotheses(self) -> "CampaignSpec":
        n = self.n
        if self.p is None:
            self.p = n
        p = self.p
        if not 1 <= p <= n:
            raise ValueError(f"need 1 <= p <= n, got n={n}, p={p}")
        if self.codim_min > self.codim_max:
            raise ValueError("codim_min exceeds codim_max")
        if self.codim_max > n * p:
            raise ValueError(f"codimension {self.codim_max} exceeds n*p = {n * p}")

        theorem = self.theorem
        if theorem in SQUARE_THEOREMS and p != n:
            raise ValueError(f"theorem {theorem.value} needs square matrices (p = n)")

        if self.ranks is None:
            self.ranks = self._default_ranks()
        if not self.ranks:
            raise ValueError("rank range is empty")
        self.ranks = sorted(set(self.ranks))
        if theorem is Theorem.FLANDERS:
            if not all(0 <= r <= p for r in self.ranks):
                raise ValueError(f"rank bounds must lie in [0, {p}]")
            return self
        if any(r < 0 or r >= p for r in self.ranks):
            raise ValueError(f"directions must satisfy 0 <= rk N < p = {p}")
        if theorem in CORANK_ONE_THEOREMS and self.ranks != [n - 1]:
            raise ValueError(f"theorem {theorem.value} needs rk N = n - 1 = {n - 1}")

        if theorem is Theorem.MAIN and p < 2:
            raise ValueError("theorem main needs p >= 2")
        if theorem is Theorem.REMARK2_STRONG and self.q < 3:
            raise ValueError("remark2-strong needs a field with more than 2 elements (q >= 3)")
        if theorem is Theorem.REMARK2_CONJECTURE and (self.q != 2 or n <= 3):
            raise ValueError("remark2-conjecture is stated for q = 2 and n > 3")
        if theorem is Theorem.REMARK2_SMALL_CODIM and (self.q != 2 or n < 3):
            raise ValueError("remark2-small-codim is stated for q = 2 and n >= 3")

        bound = self.codim_bound
        if bound is not None and self.codim_max > bound and not self.allow_out_of_hypothesis:
            raise ValueError(
                f"codimension {self.codim_max} exceeds the hypothesis bound {bound}; "
                "pass allow_out_of_hypothesis to explore it"
            )
        return self

    def _default_ranks(self) -> List[int]:
        p = self.p or self.n
        if self.theorem is Theorem.FLANDERS:
            return [p - 1]
        if self.theorem in CORANK_ONE_THEOREMS:
            return [self.n - 1]
        return list(range(p))

    @classmethod
    def build(cls, **values: Any) -> "CampaignSpec":
        """Validate, turning pydantic errors into a HypothesisError (exit code 2)."""
        try:
            return cls(**values)
        except ValidationError as e:
            messages = "; ".join(err["msg"].removeprefix("Value error, ") for err in e.errors())
            raise HypothesisError(f"invalid campaign: {messages}") from e

    @property
    def codim_bound(self) -> Optional[int]:
        """Largest codimension covered by the theorem's hypothesis."""
        if self.theorem is Theorem.FLANDERS:
            return None
        if self.theorem is Theorem.REMARK2_SMALL_CODIM:
            return self.n - 3
        return self.n - 2

    @property
    def out_of_hypothesis(self) -> bool:
        bound = self.codim_bound
        return bound is not None and self.codim_max > bound

    @property
    def gating(self) -> bool:
        """Whether failures falsify the verdict (false for conjectures and out-of-hypothesis runs)."""
        return self.theorem is not Theorem.REMARK2_CONJECTURE and not self.out_of_hypothesis

    @property
    def affine(self) -> bool:
        return self.theorem in SQUARE_THEOREMS

    @property
    def codims(self) -> range:
        return range(self.codim_min, self.codim_max + 1)

    def spec_hash(self) -> str:
        return hashlib.sha256(self.model_dump_json().encode()).hexdigest()

    def campaign_id(self) -> str:
        return self.spec_hash()[:12]


class ReportCounts(BaseModel):
    total: int = 0
    passed: int = 0
    filtered: int = 0
    failed: int = 0
    findings: int = 0


class FailureRecord(BaseModel):
    """A case without the expected outcome: subspace and N in the text formats."""
    index: int
    codim: int
    rank: int
    space: str
    N: str
    diagnostics: Dict[str, Any] = Field(default_factory=dict)


class VerificationReport(BaseModel):
    """验证结果报告"""
    spec: CampaignSpec
    counts: ReportCounts
    failures: List[FailureRecord] = Field(default_factory=list)
    findings: List[FailureRecord] = Field(default_factory=list)
    case_order_hash: str
    elapsed_ms: int = 0
    complete: bool = True
    notes: List[str] = Field(default_factory=list)

    @property
    def verdict(self) -> str:
        if self.failures:
            return "falsified"
        if not self.complete:
            return "incomplete"
        return "verified"

    @property
    def exit_code(self) -> int:
        return {"verified": 0, "falsified": 1, "incomplete": 3}[self.verdict]

    def to_text(self) -> str:
        """Plain-text summary table."""
        s = self.spec
        c = self.counts
        rows = [
            ("theorem", s.theorem.value),
            ("field", f"GF({s.q})"),
            ("size", f"{s.n}x{s.p}"),
            ("codim", f"{s.codim_min}..{s.codim_max}"),
            ("ranks", ",".join(str(r) for r in s.ranks or [])),
            ("mode", s.mode.value if s.mode is CampaignMode.EXHAUSTIVE else f"sample({s.samples}, seed {s.seed})"),
            ("cases", str(c.total)),
            ("passed", str(c.passed)),
            ("filtered", str(c.filtered)),
            ("failed", str(c.failed)),
            ("findings", str(c.findings)),
            ("case order hash", self.case_order_hash[:16]),
            ("elapsed", f"{self.elapsed_ms} ms"),
            ("verdict", self.verdict),
        ]
        width = max(len(k) for k, _ in rows)
        lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
        lines.extend(f"note: {note}" for note in self.notes)
        for record in self.failures:
            lines.append(f"failure #{record.index}: codim {record.codim}, rk N = {record.rank}, {record.diagnostics}")
        for record in self.findings:
            lines.append(f"finding #{record.index}: codim {record.codim}, rk N = {record.rank}, {record.diagnostics}")
        return "\n".join(lines) + "\n"
