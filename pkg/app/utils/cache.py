"""
Caching utilities using cachetools
"""
from functools import wraps
from threading import RLock
from typing import Any, Callable, Hashable
from cachetools import LRUCache, TTLCache
import hashlib
import json

from app.config import get_settings

settings = get_settings()

# Global cache instances
_ring_cache: LRUCache = LRUCache(maxsize=settings.ring_cache_size)
_verdict_cache: LRUCache = LRUCache(maxsize=settings.verdict_cache_size)
_report_cache: TTLCache = TTLCache(maxsize=128, ttl=settings.report_cache_ttl)
_lock = RLock()


def _jsonable(value: Any) -> Any:
    if hasattr(value, "model_dump"):
        return value.model_dump(mode="json")
    return str(value)


def get_cache_key(*args, **kwargs) -> str:
    """Generate a cache key from function arguments."""
    key_data = json.dumps({"args": args, "kwargs": kwargs}, sort_keys=True, default=_jsonable)
    return hashlib.md5(key_data.encode()).hexdigest()


def _lookup(cache, key: Hashable, compute: Callable[[], Any]) -> Any:
    with _lock:
        if key in cache:
            return cache[key]
    result = compute()
    with _lock:
        cache[key] = result
    return result


def cached_ring(func: Callable) -> Callable:
    """Decorator to cache ring handles by descriptor JSON."""
    @wraps(func)
    def wrapper(*args, **kwargs) -> Any:
        key = f"{func.__name__}:{get_cache_key(*args, **kwargs)}"
        return _lookup(_ring_cache, key, lambda: func(*args, **kwargs))

    return wrapper


def cached_verdict(func: Callable) -> Callable:
    """Decorator to cache verdicts keyed by hashable (ring, entries) arguments."""
    @wraps(func)
    def wrapper(*args) -> Any:
        key = (func.__name__,) + args
        return _lookup(_verdict_cache, key, lambda: func(*args))

    return wrapper


def cached_report(func: Callable) -> Callable:
    """Decorator to cache classification reports with a TTL."""
    @wraps(func)
    def wrapper(*args) -> Any:
        key = (func.__name__,) + args
        return _lookup(_report_cache, key, lambda: func(*args))

    return wrapper


def clear_ring_cache():
    """Clear the ring handle cache."""
    with _lock:
        _ring_cache.clear()


def clear_verdict_cache():
    """Clear the verdict cache."""
    with _lock:
        _verdict_cache.clear()


def clear_report_cache():
    """Clear the report cache."""
    with _lock:
        _report_cache.clear()


def clear_all_caches():
    """Clear all caches."""
    clear_ring_cache()
    clear_verdict_cache()
    clear_report_cache()


def get_cache_stats() -> dict:
    """Get cache statistics."""
    return {
        "ring_cache": {
            "size": len(_ring_cache),
            "maxsize": _ring_cache.maxsize,
        },
        "verdict_cache": {
            "size": len(_verdict_cache),
            "maxsize": _verdict_cache.maxsize,
        },
        "report_cache": {
            "size": len(_report_cache),
            "maxsize": _report_cache.maxsize,
            "ttl": _report_cache.ttl
        }
    }
