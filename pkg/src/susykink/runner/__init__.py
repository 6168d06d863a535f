from .artifacts import code_version, table_to_csv, write_bundle
from .config import (
    OUTPUT_DIR_ENV,
    RunConfig,
    build_run_config,
    load_yaml_config,
    parse_args_with_config,
    parse_overrides,
    parse_quantity,
)
from .state import ResultBundle, Table
from .tasks import FIGURES, TASKS, run
from .tracker import RunTracker

__all__ = [
    "FIGURES",
    "OUTPUT_DIR_ENV",
    "ResultBundle",
    "RunConfig",
    "RunTracker",
    "TASKS",
    "Table",
    "build_run_config",
    "code_version",
    "load_yaml_config",
    "parse_args_with_config",
    "parse_overrides",
    "parse_quantity",
    "run",
    "table_to_csv",
    "write_bundle",
]
