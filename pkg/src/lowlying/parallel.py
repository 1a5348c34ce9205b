import os

WORKERS_ENV = "LOWLYING_WORKERS"


def resolve_workers(workers: int | None = None) -> int:
    """Explicit value, else $LOWLYING_WORKERS, else the CPU count."""
    if workers is None:
        env = os.environ.get(WORKERS_ENV)
        workers = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(workers))
