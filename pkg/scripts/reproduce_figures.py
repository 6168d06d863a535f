#!/usr/bin/env python3

import sys
from pathlib import Path

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))

import logging
from typing import List

import argbind
from tqdm import tqdm

from susykink.runner import FIGURES, RunTracker, build_run_config, run, write_bundle

logger = logging.getLogger(__name__)


@argbind.bind(without_prefix=True)
def reproduce(
    figures: List[str] = ["all"],
    output_dir: str = "outputs/figures",
    precision: int = 17,
    log_file: str = "",
    quiet: bool = False,
    config_path: str = "",
):
    """Write the CSV/JSON artifacts behind each requested figure, one stem per parameter set."""
    _ = config_path
    names = list(FIGURES) if "all" in figures else [str(f) for f in figures]
    unknown = [n for n in names if n not in FIGURES]
    if unknown:
        raise ValueError(f"Unknown figures {unknown}; choose from {sorted(FIGURES)}")

    tracker = RunTracker(log_file=log_file or str(Path(output_dir) / "reproduce.log"), quiet=quiet)
    for name in tqdm(names, desc="figures"):
        for idx, (command, overrides) in enumerate(FIGURES[name]):
            config = build_run_config(
                command, overrides=list(overrides) + [f"stem=fig{name}_{idx}", f"precision={precision}"]
            )
            config.output.directory = output_dir
            bundle = run(config, tracker)
            written = write_bundle(bundle, config)
            tracker.log_metrics({"figure": name, "command": command, "tables": len(written["tables"])}, "figures")
    tracker.done("figures", f"{len(names)} figures in {tracker.wall_time:.1f}s")


if __name__ == "__main__":
    from susykink.runner import parse_args_with_config

    logging.basicConfig(level=logging.INFO)
    config_file = argbind.parse_args().get("config_path") or None
    args = parse_args_with_config(config_file)
    with argbind.scope(args):
        reproduce()
