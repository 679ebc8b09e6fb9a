"""FastAPI routes for the machine B4 API."""
import logging
from typing import Annotated, Optional

from fastapi import APIRouter, HTTPException, Query

from app.core.config import get_settings
from app.models.schemas import (
    ErrorResponse,
    GrowthRow,
    HealthResponse,
    MetricResponse,
    NormalFormResponse,
    OrbitRecordResponse,
    OrderResponse,
    TransduceRequest,
    TransduceResponse,
    VerificationReport,
)
from app.services import b4, group, orbit
from app.services.machine_file import resolve_state
from app.services.mealy import transduce_up
from app.services.verification import ALL, SUITES, SuiteError, run_suite
from app.services.words import longest_common_prefix_len, parse_upword, prefix_metric

logger = logging.getLogger(__name__)

router = APIRouter()

BAD_REQUEST = {400: {"model": ErrorResponse, "description": "Invalid input"}}


def _bad_request(exc: Exception) -> HTTPException:
    logger.info(f"Rejected request: {exc}")
    return HTTPException(status_code=400, detail=str(exc))


@router.get("/health", response_model=HealthResponse)
def health_check() -> HealthResponse:
    """Health check endpoint."""
    return HealthResponse(ok=True)


@router.post("/transduce", response_model=TransduceResponse, responses=BAD_REQUEST)
def transduce(request: TransduceRequest) -> TransduceResponse:
    """Image of an infinite word under B4 started in the given state."""
    try:
        machine = b4.b4_machine()
        state = resolve_state(machine, request.state)
        word = parse_upword(request.word)
        output = transduce_up(machine.at(state), word)
    except ValueError as exc:
        raise _bad_request(exc) from exc
    return TransduceResponse(state=state, word=str(word), output=str(output))


@router.get("/elements/{element}/order", response_model=OrderResponse, responses=BAD_REQUEST)
def element_order(
    element: str,
    cap: Annotated[Optional[int], Query(ge=1, le=1_000_000)] = None,
) -> OrderResponse:
    """
    Order of a group element given as a generator word.

    Returns "EXCEEDS_CAP" when no power up to cap is the identity.
    """
    try:
        word = group.parse_group_word(element)
        found = group.order(word, cap or get_settings().order_cap)
    except ValueError as exc:
        raise _bad_request(exc) from exc
    value = found.value if isinstance(found, group.OrderStatus) else found
    return OrderResponse(element=str(word), order=value)


@router.get(
    "/elements/{element}/normal-form", response_model=NormalFormResponse, responses=BAD_REQUEST
)
def element_normal_form(element: str) -> NormalFormResponse:
    try:
        word = group.parse_group_word(element)
    except ValueError as exc:
        raise _bad_request(exc) from exc
    return NormalFormResponse(element=str(word), normal_form=str(group.normal_form(word)))


@router.get("/metric", response_model=MetricResponse, responses=BAD_REQUEST)
def metric(x: str, y: str) -> MetricResponse:
    try:
        first, second = parse_upword(x), parse_upword(y)
    except ValueError as exc:
        raise _bad_request(exc) from exc
    common = longest_common_prefix_len(first, second)
    return MetricResponse(
        x=str(first),
        y=str(second),
        distance=str(prefix_metric(first, second)),
        common_prefix=common if isinstance(common, int) else common.value,
    )


@router.get("/orbit", response_model=list[OrbitRecordResponse], responses=BAD_REQUEST)
def orbit_records(
    start: str,
    steps: Annotated[int, Query(ge=0, le=65536)],
    prefix: Annotated[int, Query(ge=0, le=64)] = 0,
) -> list[OrbitRecordResponse]:
    """Points start ξ^k, k = 1..steps, each split after prefix letters."""
    try:
        point = parse_upword(start)
    except ValueError as exc:
        raise _bad_request(exc) from exc
    return [
        OrbitRecordResponse(k=record.k, u_k=str(record.u_k), x_k=str(record.x_k))
        for record in orbit.sweep(point, steps, prefix)
    ]


@router.post(
    "/verify/{suite}",
    response_model=VerificationReport,
    responses={**BAD_REQUEST, 404: {"model": ErrorResponse, "description": "Unknown suite"}},
)
def verify(
    suite: str,
    max: Annotated[Optional[int], Query(ge=0, le=16)] = None,
) -> VerificationReport:
    """
    Run a named verification suite.

    The report is returned with status 200 whether or not every check passed;
    inspect the "passed" field.
    """
    if suite != ALL and suite not in SUITES:
        raise HTTPException(status_code=404, detail=f"Suite {suite} not found")
    logger.info(f"API: running suite {suite} (max={max})")
    try:
        return run_suite(suite, max)
    except SuiteError as exc:
        raise _bad_request(exc) from exc


@router.get("/enumerate", response_model=list[GrowthRow])
def enumerate_elements(
    max_len: Annotated[int, Query(ge=0, le=10)],
) -> list[GrowthRow]:
    """Number of distinct elements with word length at most L, per L."""
    return [
        GrowthRow(length=length, count=count)
        for length, count in group.enumerate_elements(max_len)
    ]
