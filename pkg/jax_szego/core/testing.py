from contextlib import contextmanager
from dataclasses import dataclass
from time import perf_counter_ns


@dataclass
class StageTiming:
    """Wall time of a timed block in milliseconds; ``dt`` is None until the block exits."""

    label: str = ""
    dt: float = None

    def __str__(self):
        if self.dt is None:
            return "- ms"
        return "%.1f s" % (self.dt / 1000) if self.dt > 10000 else "%.3f ms" % self.dt


@contextmanager
def time_code_block(msg=None, quiet=False, logger=None):
    """Time the enclosed block. The duration is logged at debug level when a logger is
    given and printed otherwise."""
    timing = StageTiming(label=msg or "")
    start = perf_counter_ns()
    try:
        yield timing
    finally:
        timing.dt = (perf_counter_ns() - start) / 1e6
        if not quiet:
            prefix = timing.label + " " if timing.label else ""
            if logger is not None:
                logger.debug("%stime: %s", prefix, timing)
            else:
                print("%stime: %s" % (prefix, timing))
