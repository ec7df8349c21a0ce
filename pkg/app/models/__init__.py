"""
Models package
"""
from app.models.ring import RingDescriptor, RingRequest, RingInfo, BezoutRequest, BezoutResponse
from app.models.matrix import MatrixPayload
from app.models.extension import ExtensionRequest, ExtensionOutcomePayload, ReduceRequest, ReduceResponse
from app.models.enumeration import NuRequest, NuSamplePayload
from app.models.classification import RingClassReportPayload, MatrixClassificationPayload, SweepRequest, SweepResponse
