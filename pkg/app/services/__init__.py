"""
Services package
"""
from app.services.engine_service import get_engine_service, EngineService
