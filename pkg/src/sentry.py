"""
Sentry error tracking and tracing for NetFactor runs.

Nothing is sent until init_sentry() succeeds; before that every helper
returns immediately, so library code calls them unconditionally.
"""

import functools
import logging
import os
from typing import Any, Callable, Optional

import sentry_sdk
from sentry_sdk.integrations.logging import LoggingIntegration
from sentry_sdk.transport import Transport

logger = logging.getLogger(__name__)

_enabled = False


def init_sentry(
    dsn: str,
    environment: str = "production",
    traces_sample_rate: float = 0.2,
    release: Optional[str] = None,
    transport: Optional[Transport] = None,
) -> bool:
    """
    Start the Sentry client for this process.

    Args:
        dsn: Project DSN (SENTRY_DSN); empty disables reporting
        environment: Deployment name attached to every event
        traces_sample_rate: Share of runs traced, 0.0 to 1.0
        release: Release tag (VERSION when omitted)
        transport: Replacement transport, e.g. to keep events in memory

    Returns:
        True when events will be sent
    """
    global _enabled

    if not dsn:
        logger.info("SENTRY_DSN empty, error reporting disabled")
        return False
    if _enabled:
        return True

    try:
        sentry_sdk.init(
            dsn=dsn,
            environment=environment,
            release=release or os.getenv("VERSION", "unknown"),
            # Log records become breadcrumbs; ERROR records become events
            integrations=[LoggingIntegration(level=logging.INFO, event_level=logging.ERROR)],
            traces_sample_rate=traces_sample_rate,
            send_default_pii=False,
            attach_stacktrace=True,
            transport=transport,
        )
        sentry_sdk.set_tag("service", "netfactor")
    except Exception as e:
        logger.error(f"Sentry setup failed: {e}")
        return False

    _enabled = True
    logger.info(f"Sentry enabled (env={environment}, traces={traces_sample_rate})")
    return True


def shutdown_sentry(timeout: float = 2.0) -> None:
    """Flush pending events and stop reporting."""
    global _enabled

    if not _enabled:
        return
    try:
        sentry_sdk.get_client().close(timeout=timeout)
    except Exception as e:
        logger.debug(f"Sentry shutdown: {e}")
    _enabled = False


def set_run_context(command: str, seed: Optional[int] = None) -> None:
    """Tag later events with the CLI command and its master seed."""
    if not _enabled:
        return

    sentry_sdk.set_tag("command", command)
    sentry_sdk.set_context("run", {"command": command, "seed": seed})


def capture_exception(exception: Exception, **extra: Any) -> None:
    """Report an exception, attaching extra key/value pairs to this event only."""
    if not _enabled:
        return

    with sentry_sdk.new_scope() as scope:
        for key, value in extra.items():
            scope.set_extra(key, value)
        sentry_sdk.capture_exception(exception)


def traced(op: str, name: Optional[str] = None) -> Callable:
    """
    Run the decorated function inside a Sentry transaction.

    Exceptions are reported and re-raised; the transaction status tells
    failed runs apart.

    Example:
        @traced(op="simulate", name="run_case")
        def run_case(config): ...
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            if not _enabled:
                return func(*args, **kwargs)

            with sentry_sdk.start_transaction(op=op, name=name or func.__name__) as transaction:
                try:
                    result = func(*args, **kwargs)
                except Exception as e:
                    transaction.set_status("internal_error")
                    sentry_sdk.capture_exception(e)
                    raise
                transaction.set_status("ok")
                return result

        return wrapper
    return decorator


class TracingContext:
    """
    Child span around a block, e.g. writing one report.

    Example:
        with TracingContext(op="io", description="write_estimate") as span:
            span.set_data("files", 4)
    """

    def __init__(self, op: str, description: str):
        self.op = op
        self.description = description
        self._span = None

    def __enter__(self) -> "TracingContext":
        if _enabled:
            self._span = sentry_sdk.start_span(op=self.op, name=self.description)
            self._span.__enter__()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> bool:
        if self._span is not None:
            self._span.__exit__(exc_type, exc_val, exc_tb)
            self._span = None
        return False

    def set_data(self, key: str, value: Any) -> None:
        if self._span is not None:
            self._span.set_data(key, value)
