"""Pydantic schemas for verification reports and API request/response models."""
from typing import Optional, Union

from pydantic import BaseModel, Field, computed_field


class CheckResult(BaseModel):
    """Outcome of one verified identity."""

    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"CHECK {self.name} {status} {self.detail}".rstrip()


class VerificationReport(BaseModel):
    """Checks produced by one verification run."""

    suite: str
    checks: list[CheckResult] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> CheckResult:
        check = CheckResult(name=name, passed=passed, detail=detail)
        self.checks.append(check)
        return check

    def merge(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def lines(self) -> list[str]:
        return [check.line() for check in self.checks]


class KleinTableReport(VerificationReport):
    """Klein four-group checks plus the multiplication table."""

    elements: list[str] = Field(default_factory=list)
    table: list[list[str]] = Field(default_factory=list)


class WitnessReport(BaseModel):
    """An orbit point found close to a target."""

    start: str
    target: str
    prefix_length: int
    found: bool
    index: Optional[int] = None
    distance: Optional[str] = None
    bound: str
    within_bound: bool = False
    iterations: int


class HealthResponse(BaseModel):
    """Health check response."""

    ok: bool


class TransduceRequest(BaseModel):
    """Transduce an infinite word from a state of B4."""

    state: str
    word: str


class TransduceResponse(BaseModel):
    state: str
    word: str
    output: str


class OrderResponse(BaseModel):
    element: str
    order: Union[int, str]


class NormalFormResponse(BaseModel):
    element: str
    normal_form: str


class MetricResponse(BaseModel):
    x: str
    y: str
    distance: str
    common_prefix: Union[int, str]


class OrbitRecordResponse(BaseModel):
    k: int
    u_k: str
    x_k: str


class GrowthRow(BaseModel):
    length: int
    count: int


class ErrorResponse(BaseModel):
    """Error response."""

    detail: str
