"""
Codec - conversions between JSON payloads and engine values
"""
from dataclasses import replace
from typing import Any, List, Sequence

from app.models.classification import (
    CounterexamplePayload,
    MatrixClassificationPayload,
    RingClassReportPayload,
)
from app.models.enumeration import NuSamplePayload
from app.models.extension import (
    CertificatePayload,
    CharPolyPayload,
    DivisorCasePayload,
    ExtensionOutcomePayload,
    WitnessPayload,
)
from app.models.matrix import MatrixPayload
from app.services.classification import MatrixClassification, RingClassReport
from app.services.enumeration import NuSample
from app.services.extension_engine import (
    Certificate,
    ExtensionOutcome,
    FullnessWitness,
    OutcomeStatus,
    validate_extension,
)
from app.services.matrix_core import Mat2, Mat3, char_poly3
from app.services.ring_core import Element, Ring, make_ring


def dump_elements(R: Ring, xs: Sequence[Element]) -> List[Any]:
    return [R.dump(x) for x in xs]


def parse_elements(R: Ring, raw: Sequence[Any]) -> List[Element]:
    return [R.parse(x) for x in raw]


# ── Matrices ──


def matrix_from_payload(payload: MatrixPayload) -> Mat2:
    R = make_ring(payload.ring)
    return Mat2.from_rows(R, [parse_elements(R, row) for row in payload.rows])


def matrix_to_payload(A: Mat2) -> MatrixPayload:
    R = A.ring
    return MatrixPayload(ring=R.descriptor(), rows=[dump_elements(R, row) for row in A.rows])


def matrix3_rows(Q: Mat3) -> List[List[Any]]:
    return [dump_elements(Q.ring, row) for row in Q.rows]


# ── Outcomes ──


def certificate_to_payload(R: Ring, cert: Certificate) -> CertificatePayload:
    e, f, s, t = dump_elements(R, cert.quadruple)
    return CertificatePayload(e=e, f=f, s=s, t=t, via_transpose=cert.via_transpose)


def witness_to_payload(R: Ring, witness: FullnessWitness) -> WitnessPayload:
    return WitnessPayload(
        mode=witness.mode.value,
        column=dump_elements(R, witness.column) if witness.column else None,
        row=dump_elements(R, witness.row) if witness.row else None,
        pivot=list(witness.pivot) if witness.pivot else None,
        divisors=dump_elements(R, witness.divisors),
        cases=[DivisorCasePayload(divisor=R.dump(c.divisor), reason=c.reason) for c in witness.cases],
        searched=witness.searched,
        modulus=R.dump(witness.modulus) if witness.modulus is not None else None,
    )


def outcome_to_payload(outcome: ExtensionOutcome) -> ExtensionOutcomePayload:
    A = outcome.matrix
    R = A.ring
    payload = ExtensionOutcomePayload(
        status=outcome.status.value,
        route=outcome.route,
        matrix=matrix_to_payload(A),
        bound=outcome.bound,
    )
    if outcome.extension is not None:
        validate_extension(A, outcome.extension, simple=outcome.status == OutcomeStatus.SIMPLE)
        trace, nu, det = char_poly3(outcome.extension)
        payload.extension = matrix3_rows(outcome.extension)
        payload.char_poly = CharPolyPayload(trace=R.dump(trace), nu=R.dump(nu), det=R.dump(det))
    if outcome.certificate is not None:
        payload.certificate = certificate_to_payload(R, outcome.certificate)
    if outcome.witness is not None:
        modulus = outcome.witness.modulus
        # a witness found modulo det(A) lives in the quotient ring
        witness_ring = R if modulus is None else R.quotient(modulus)
        payload.witness = witness_to_payload(witness_ring, replace(outcome.witness, modulus=None))
        if modulus is not None:
            payload.witness.modulus = R.dump(modulus)
    return payload


# ── Enumeration and classification ──


def nu_sample_to_payload(sample: NuSample) -> NuSamplePayload:
    return NuSamplePayload(
        matrix=matrix_to_payload(sample.matrix),
        bound=sample.bound,
        count=len(sample.gamma),
        values=list(sample.values),
        gamma=[list(q) for q in sample.gamma],
    )


def report_to_payload(report: RingClassReport) -> RingClassReportPayload:
    R = report.ring
    counterexample = None
    if report.counterexample is not None:
        counterexample = CounterexamplePayload(
            predicate=report.counterexample.predicate,
            witness=dump_elements(R, report.counterexample.witness),
        )
    return RingClassReportPayload(
        ring=R.descriptor(),
        size=report.size,
        sr1=report.sr1,
        fsr15=report.fsr15,
        asr1=report.asr1,
        pi2=report.pi2,
        e2=report.e2,
        se2=report.se2,
        counterexample=counterexample,
        matrices_checked=report.matrices_checked,
    )


def classification_to_payload(result: MatrixClassification) -> MatrixClassificationPayload:
    R = result.matrix.ring
    return MatrixClassificationPayload(
        matrix=matrix_to_payload(result.matrix),
        unimodular=result.unimodular,
        det=R.dump(result.det),
        det_is_unit=result.det_is_unit,
        non_full=result.non_full,
        extendable=result.extendable,
        simply_extendable=result.simply_extendable,
        outcome=outcome_to_payload(result.outcome) if result.outcome is not None else None,
    )
