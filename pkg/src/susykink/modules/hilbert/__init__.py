from .space import (
    HilbertSpace,
    OccupationState,
    RydbergSpace,
    apply_c,
    apply_c_dag,
    enumerate_rydberg,
    enumerate_space,
    popcount,
)

__all__ = [
    "HilbertSpace",
    "OccupationState",
    "RydbergSpace",
    "apply_c",
    "apply_c_dag",
    "enumerate_rydberg",
    "enumerate_space",
    "popcount",
]
