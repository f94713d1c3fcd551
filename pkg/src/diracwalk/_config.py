import os


def max_threads() -> int:
    """Parallelism cap taken from ``DIRAC_WALK_THREADS`` (default: all cores)."""
    raw = os.environ.get("DIRAC_WALK_THREADS")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"DIRAC_WALK_THREADS must be a positive integer, got {raw!r}")
        if value < 1:
            raise ValueError(f"DIRAC_WALK_THREADS must be a positive integer, got {raw!r}")
        return value
    return os.cpu_count() or 1
