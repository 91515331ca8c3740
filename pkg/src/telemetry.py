"""
Process and host statistics attached to run reports.
"""

import logging
import os
import platform

import psutil

logger = logging.getLogger(__name__)


def cpu_count() -> int:
    """Logical CPUs available, at least 1."""
    return psutil.cpu_count(logical=True) or 1


def process_stats() -> dict:
    """Resident memory of this process plus basic host information."""
    stats = {
        "hostname": platform.node(),
        "python_version": platform.python_version(),
        "cpu_count": cpu_count(),
    }

    try:
        process = psutil.Process(os.getpid())
        memory = psutil.virtual_memory()
        stats["rss_mb"] = process.memory_info().rss / (1024 * 1024)
        stats["memory_percent"] = memory.percent
    except Exception as e:
        logger.debug(f"Process stats unavailable: {e}")

    return stats
