"""
SL3 Extension Engine
"""
