"""Shared JSON-over-HTTP POST with the backend error taxonomy."""

from __future__ import annotations

import httpx

from .errors import BackendError, BackendTimeout, BackendUnavailable


def post_json(url: str, payload: dict, timeout: float):
    try:
        response = httpx.post(url, json=payload, timeout=timeout)
    except httpx.TimeoutException as exc:
        raise BackendTimeout(f"{url} did not answer within {timeout}s") from exc
    except httpx.HTTPError as exc:
        raise BackendUnavailable(url, exc) from exc
    if not response.is_success:
        raise BackendUnavailable(url, f"HTTP {response.status_code}: {response.text[:200]}")
    try:
        return response.json()
    except ValueError as exc:
        raise BackendError(f"{url} returned invalid JSON") from exc
