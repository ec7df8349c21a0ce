"""
Engine Service - payload-level facade over the extension engine

Routers and the CLI both go through this service, so a request is
decoded, decided and encoded the same way on either surface.
"""
import logging
from typing import List, Optional

from app.models.classification import (
    MatrixClassificationPayload,
    RingClassReportPayload,
    SweepRequest,
    SweepResponse,
)
from app.models.enumeration import NuRequest, NuSamplePayload
from app.models.extension import (
    ExtensionOutcomePayload,
    ExtensionRequest,
    ReduceRequest,
    ReduceResponse,
)
from app.models.ring import BezoutRequest, BezoutResponse, RingInfo, RingRequest
from app.services import classification, enumeration, extension_engine
from app.services.codec import (
    classification_to_payload,
    dump_elements,
    matrix_from_payload,
    matrix_to_payload,
    nu_sample_to_payload,
    outcome_to_payload,
    report_to_payload,
)
from app.services.errors import NotUnimodularError
from app.services.matrix_core import det2, is_unimodular_mat2, reduce_mod
from app.services.ring_core import make_ring

logger = logging.getLogger(__name__)


class EngineService:
    """Decodes requests, runs the engine and encodes the results."""

    # ── Rings ──

    def describe_ring(self, request: RingRequest) -> RingInfo:
        R = make_ring(request.ring)
        caps = R.capabilities
        return RingInfo(
            ring=R.descriptor(),
            finite=caps.finite,
            size=R.size,
            bezout=caps.bezout,
            divisor_enumeration=caps.divisor_enumeration,
            gcd=caps.gcd,
            stable_range_bound=caps.stable_range_bound,
            units=dump_elements(R, R.units()) if caps.finite else None,
        )

    def bezout(self, request: BezoutRequest) -> BezoutResponse:
        R = make_ring(request.ring)
        coefficients = R.bezout([R.parse(x) for x in request.elements])
        if coefficients is None:
            return BezoutResponse(unimodular=False)
        return BezoutResponse(unimodular=True, coefficients=dump_elements(R, coefficients))

    # ── Extensions ──

    def simply_extend(self, request: ExtensionRequest) -> ExtensionOutcomePayload:
        A = matrix_from_payload(request.matrix)
        outcome = extension_engine.simply_extend(A, request.bound)
        logger.debug("simply_extend %s: %s via %s", A, outcome.status.value, outcome.route)
        return outcome_to_payload(outcome)

    def extend(self, request: ExtensionRequest) -> ExtensionOutcomePayload:
        A = matrix_from_payload(request.matrix)
        outcome = extension_engine.extend(A, request.bound)
        logger.debug("extend %s: %s via %s", A, outcome.status.value, outcome.route)
        return outcome_to_payload(outcome)

    def reduce(self, request: ReduceRequest) -> ReduceResponse:
        A = matrix_from_payload(request.matrix)
        R = A.ring
        if not is_unimodular_mat2(A):
            raise NotUnimodularError(A.entries)
        modulus = det2(A) if request.modulus is None else R.parse(request.modulus)
        reduced = reduce_mod(A, modulus)
        return ReduceResponse(matrix=matrix_to_payload(reduced), modulus=R.dump(modulus))

    # ── Enumeration ──

    def nu(self, request: NuRequest) -> NuSamplePayload:
        A = matrix_from_payload(request.matrix)
        return nu_sample_to_payload(enumeration.nu_enumerate(A, request.bound))

    # ── Classification ──

    def classify_ring(self, request: RingRequest) -> RingClassReportPayload:
        R = make_ring(request.ring)
        return report_to_payload(classification.classify_finite_ring(R))

    def classify_matrix(self, request: ExtensionRequest) -> MatrixClassificationPayload:
        A = matrix_from_payload(request.matrix)
        return classification_to_payload(classification.classify_matrix(A, request.bound))

    def sweep(self, request: SweepRequest, workers: Optional[int] = None) -> SweepResponse:
        reports: List[RingClassReportPayload] = [
            report_to_payload(report)
            for report in classification.sweep(request.start, request.stop, workers)
        ]
        return SweepResponse(reports=reports, total=len(reports))


# Singleton instance
_service: Optional[EngineService] = None


def get_engine_service() -> EngineService:
    """Get or create engine service singleton."""
    global _service
    if _service is None:
        _service = EngineService()
    return _service
