from __future__ import annotations

import time
from pathlib import Path
from typing import Dict, List, Optional


class RunTracker:
    """
    Progress reporter for one CLI run.

    Messages go to stdout and are appended to an optional logfile;
    warnings raised along the way are collected for the result metadata.
    """

    def __init__(self, *, log_file: Optional[str] = None, quiet: bool = False):
        self.log_file = Path(log_file) if log_file else None
        if self.log_file:
            self.log_file.parent.mkdir(parents=True, exist_ok=True)
        self.quiet = quiet
        self.step = 0
        self.warnings: List[str] = []
        self._started = time.time()
        # time of the previous log_metrics call
        self._last_log_time: float | None = None

    # ------------------------------------------------------------------ #
    # Logging helpers
    # ------------------------------------------------------------------ #
    def print(self, message: str):
        if not self.quiet:
            print(message, flush=True)
        if self.log_file:
            with self.log_file.open("a", encoding="utf-8") as f:
                f.write(message + "\n")

    def log_metrics(self, metrics: Dict[str, float], split: str):
        now = time.time()
        dt_str = ""
        if self._last_log_time is not None:
            dt_str = f", log interval: {now - self._last_log_time:.2f}s"
        self._last_log_time = now
        self.step += 1

        formatted = ", ".join(f"{k}: {v:.6f}" if isinstance(v, float) else f"{k}: {v}" for k, v in metrics.items())
        self.print(f"[{split}] step {self.step}: {formatted}{dt_str}")

    def warn(self, message: str):
        self.warnings.append(message)
        self.print(f"[warning] {message}")

    def done(self, split: str, message: str):
        self.print(f"[{split}] {message}")

    @property
    def wall_time(self) -> float:
        return time.time() - self._started
